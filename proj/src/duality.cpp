#include "wpd/duality.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/random/mersenne_twister.hpp>
#include <boost/random/uniform_on_sphere.hpp>

#include "wpd/errors.hpp"
#include "wpd/rng.hpp"

namespace wpd {

namespace {
constexpr cplx I{0.0, 1.0};
constexpr double kCheckTol = 1e-10;

double safe_sqrt(double x) { return std::sqrt(std::max(0.0, x)); }

void check(bool ok, const char* what) {
  if (!ok) throw InternalCheckFailure(what);
}
}  // namespace

RotationSpec su2_decompose(const CMat2& u) {
  if (!u.all_finite() || !is_unitary(u)) throw NonUnitary("su2_decompose needs a unitary matrix");
  const cplx det = u(0, 0) * u(1, 1) - u(0, 1) * u(1, 0);
  CMat2 v = (1.0 / std::sqrt(det)) * u;
  if (trace(v).real() < 0.0) v *= -1.0;

  RotationSpec rot;
  rot.e0 = std::max(0.0, 0.5 * trace(v).real());
  for (int k = 0; k < 3; ++k) rot.e[k] = (trace(pauli(k + 1) * v) / (2.0 * I)).real();
  const double en = norm(rot.e);
  rot.axis = en < 1e-12 ? Vec3{0.0, 1.0, 0.0} : (1.0 / en) * rot.e;
  rot.omega = 2.0 * std::atan2(en, rot.e0);
  return rot;
}

CMat2 su2_matrix(const RotationSpec& rot) {
  CMat2 m = rot.e0 * sigma0();
  for (int k = 0; k < 3; ++k) m += (I * rot.e[k]) * pauli(k + 1);
  return m;
}

CMat2 inter_path_unitary(const InterferometerConfig& cfg) {
  return adjoint(retro_rotator(Angle::deg(cfg.theta0_deg))) *
         retro_rotator_flipped(Angle::deg(cfg.theta1_deg));
}

double visibility_stokes(const RotationSpec& rot, const StokesVector& s) {
  const double es = dot(rot.e, s.vec());
  return safe_sqrt(rot.e0 * rot.e0 + es * es);
}

// |e|^2 |s|^2 - (e.s)^2 written as |e x s|^2 to keep small values accurate.
double dc_stokes(const RotationSpec& rot, const StokesVector& s) {
  return norm(cross(rot.e, s.vec()));
}

double dc_trace_distance(const PolDensity& rho0, const PolDensity& rho1) {
  return 0.5 * trace_norm_herm(rho0.matrix() - rho1.matrix());
}

double d_general(const RotationSpec& rot, const StokesVector& s) {
  const Vec3 x = cross(rot.e, s.vec());
  return safe_sqrt(dot(x, x) + dot(rot.e, rot.e) * (1.0 - dot(s.vec(), s.vec())));
}

double d_pure(const PureJones& phi, const CMat2& u) {
  // Length of the component of U phi orthogonal to phi; avoids the
  // cancellation in sqrt(1 - |<phi|U phi>|^2) near overlap 1.
  const CVec<2> v = apply(u, phi.amplitude);
  const cplx ov = inner(phi.amplitude, v);
  CVec<2> r;
  for (std::size_t i = 0; i < 2; ++i) r[i] = v[i] - ov * phi.amplitude[i];
  return std::min(1.0, norm(r));
}

DecompositionResult decompose_for_axis(const StokesVector& s, const Vec3& axis) {
  const double len = s.norm();
  if (len > 1.0 + kTagTolerance) throw InvalidState("Stokes vector outside the unit ball");
  DecompositionResult out;
  if (len >= 1.0 - kTagTolerance) {
    out.s_alpha = (1.0 / len) * s.vec();
    out.s_beta = out.s_alpha;
    out.p_alpha = 1.0;
    out.p_beta = 0.0;
    return out;
  }
  const Vec3 n = (1.0 / norm(axis)) * axis;
  const double h = dot(n, s.vec());
  const Vec3 off_axis = s.vec() - h * n;
  const double t = norm(off_axis);
  Vec3 u;
  if (t > 1e-12) {
    u = (1.0 / t) * off_axis;
  } else {
    Vec3 cand = Vec3{0.0, 0.0, 1.0} - n[2] * n;
    if (norm(cand) < 1e-12) cand = Vec3{1.0, 0.0, 0.0} - n[0] * n;
    u = (1.0 / norm(cand)) * cand;
  }
  const double r = std::sqrt(1.0 - h * h);
  out.s_alpha = h * n + r * u;
  out.s_beta = h * n - r * u;
  out.p_alpha = (r + t) / (2.0 * r);
  out.p_beta = (r - t) / (2.0 * r);
  return out;
}

std::pair<double, double> d_branches(const CMat2& u_s, const StokesVector& s) {
  const RotationSpec rot = su2_decompose(u_s);
  const DecompositionResult dec = decompose_for_axis(s, rot.axis);
  return {d_pure(jones_from_stokes(dec.s_alpha), u_s), d_pure(jones_from_stokes(dec.s_beta), u_s)};
}

double d_via_decomposition(const CMat2& u_s, const StokesVector& s) {
  const RotationSpec rot = su2_decompose(u_s);
  const DecompositionResult dec = decompose_for_axis(s, rot.axis);
  const auto [da, db] = d_branches(u_s, s);
  return dec.p_alpha * da + dec.p_beta * db;
}

MeasurementBasis basis_from_axis(const Vec3& m) {
  return {jones_from_stokes(m), jones_from_stokes(-1.0 * m)};
}

double likelihood(const MeasurementBasis& w, const PolDensity& rho0, const PolDensity& rho1) {
  const auto& p = w.plus.amplitude;
  const auto& q = w.minus.amplitude;
  if (std::abs(norm(p) - 1.0) > 1e-10 || std::abs(norm(q) - 1.0) > 1e-10 ||
      std::abs(inner(p, q)) > 1e-10)
    throw NonOrthonormalBasis("likelihood needs an orthonormal measurement basis");
  const auto pr = [](const PolDensity& rho, const CVec<2>& v) {
    return expectation(rho.matrix(), v).real();
  };
  return 0.5 * (std::max(pr(rho0, p), pr(rho1, p)) + std::max(pr(rho0, q), pr(rho1, q)));
}

namespace {

constexpr std::size_t kSearchBlock = 1024;

struct Candidate {
  double value = -1.0;
  Vec3 axis{0.0, 0.0, 1.0};
};

Vec3 unit(const Vec3& v) { return (1.0 / norm(v)) * v; }

// Golden-section maximization of f on [lo, hi].
template <class F>
double golden_max(F&& f, double lo, double hi) {
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - g * (b - a), d = a + g * (b - a);
  double fc = f(c), fd = f(d);
  for (int i = 0; i < 80 && (b - a) > 1e-14; ++i) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - g * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + g * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace

LikelihoodSearch max_likelihood_search(const PolDensity& rho0, const PolDensity& rho1,
                                       std::size_t trials, std::uint64_t seed, Exec exec) {
  if (trials < 1) throw RangeError("likelihood search needs at least one trial");
  const auto score = [&](const Vec3& m) { return likelihood(basis_from_axis(m), rho0, rho1); };

  const std::size_t blocks = (trials + kSearchBlock - 1) / kSearchBlock;
  const auto per_block = ordered_map(
      blocks,
      [&](std::size_t b) {
        boost::random::mt19937_64 engine(derive_seed(seed, b));
        boost::random::uniform_on_sphere<double> sphere(3);
        Candidate best;
        const std::size_t end = std::min(trials, (b + 1) * kSearchBlock);
        for (std::size_t t = b * kSearchBlock; t < end; ++t) {
          const auto p = sphere(engine);
          const Vec3 m{p[0], p[1], p[2]};
          const double v = score(m);
          if (v > best.value) best = {v, m};
        }
        return best;
      },
      exec);
  // Ties keep the earliest block so the merge does not depend on scheduling.
  Candidate best = per_block.front();
  for (const auto& c : per_block)
    if (c.value > best.value) best = c;

  // Local refinement in the tangent plane of the incumbent axis.
  Vec3 m = best.axis;
  double width = 0.2;
  for (int sweep = 0; sweep < 12; ++sweep) {
    Vec3 helper = std::abs(m[0]) < 0.9 ? Vec3{1.0, 0.0, 0.0} : Vec3{0.0, 1.0, 0.0};
    const Vec3 t1 = unit(cross(m, helper));
    const Vec3 t2 = cross(m, t1);
    for (const Vec3& t : {t1, t2}) {
      const auto along = [&](double a) { return score(unit(m + a * t)); };
      const double a = golden_max(along, -width, width);
      const Vec3 cand = unit(m + a * t);
      if (score(cand) >= score(m)) m = cand;
    }
    width *= 0.5;
  }
  LikelihoodSearch out;
  out.best_axis = score(m) >= best.value ? m : best.axis;
  out.best = basis_from_axis(out.best_axis);
  out.l_max = score(out.best_axis);
  return out;
}

double helstrom_bound(double d) {
  if (!(d >= 0.0 && d <= 1.0)) throw RangeError("distinguishability must lie in [0, 1]");
  return 0.5 * (1.0 - d);
}

DualityReport duality_report(const InterferometerConfig& cfg, const StokesVector& s) {
  const PolDensity rho = density_from_stokes(s);
  const CMat2 u_s = inter_path_unitary(cfg);
  const RotationSpec rot = su2_decompose(u_s);

  DualityReport r;
  r.V = visibility_stokes(rot, s);
  r.D_c = dc_stokes(rot, s);
  r.D = d_general(rot, s);
  r.C_we = concurrence_we(rho);
  r.sum_VD = r.V * r.V + r.D * r.D;
  r.sum_VDc = r.V * r.V + r.D_c * r.D_c;

  // Matrix routes against the closed forms.
  InterferometerConfig ideal = cfg;
  ideal.block = Block::none;
  const double vis_matrix = std::abs(interference_coefficient(ideal, rho));
  check(std::abs(vis_matrix - r.V) <= kCheckTol, "visibility: |C_i| disagrees with Stokes form");

  const PortOutput via0 = conditional_output(ideal, rho, 0, 1);
  const PortOutput via1 = conditional_output(ideal, rho, 1, 1);
  r.D_P = std::abs(via0.prob - via1.prob) / (via0.prob + via1.prob);
  const double dc_matrix = dc_trace_distance(via0.state, via1.state);
  check(std::abs(dc_matrix - r.D_c) <= kCheckTol, "D_c: trace distance disagrees with Stokes form");

  const double d_dec = d_via_decomposition(u_s, s);
  check(std::abs(d_dec - r.D) <= kCheckTol, "D: decomposition disagrees with closed form");

  const double s2 = dot(s.vec(), s.vec());
  check(std::abs(r.sum_VD - 1.0) <= kCheckTol, "V^2 + D^2 != 1");
  check(std::abs(r.sum_VDc - (rot.e0 * rot.e0 + dot(rot.e, rot.e) * s2)) <= kCheckTol,
        "V^2 + D_c^2 != e0^2 + |e|^2 |s|^2");
  check(r.D_c <= r.D + kCheckTol, "D_c exceeds D");
  return r;
}

DualityCase classify_case(const StokesVector& s) {
  constexpr double tol = 1e-9;
  const double len = s.norm();
  const double a2 = std::abs(s.s2);
  if (std::abs(len - 1.0) <= tol) {
    if (a2 <= tol) return DualityCase::a;
    if (std::abs(a2 - 1.0) <= tol) return DualityCase::c;
    return DualityCase::b;
  }
  if (a2 <= tol) return DualityCase::d;
  if (std::abs(a2 - len) <= tol) return DualityCase::f;
  return DualityCase::e;
}

char case_letter(DualityCase c) { return static_cast<char>('a' + static_cast<int>(c)); }

}  // namespace wpd
