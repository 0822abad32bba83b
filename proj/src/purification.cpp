#include "wpd/purification.hpp"

#include <algorithm>

#include "wpd/errors.hpp"

namespace wpd {

namespace {

constexpr double kNormTol = 1e-12;

bool unit_norm(double n2) { return std::abs(n2 - 1.0) <= kNormTol; }

template <std::size_t N>
CVec<N> scaled(const CVec<N>& v, cplx s) {
  CVec<N> out = v;
  for (auto& x : out) x *= s;
  return out;
}

template <std::size_t N>
CVec<N> sum(const CVec<N>& a, const CVec<N>& b) {
  CVec<N> out = a;
  for (std::size_t i = 0; i < N; ++i) out[i] += b[i];
  return out;
}

CVec<2> orthogonal(const CVec<2>& v) { return {-std::conj(v[1]), std::conj(v[0])}; }

CVec<4> apply_marker(const CMat2& u, const CVec<4>& psi) {
  return wpd::apply(tensor2x2(u, CMat2::identity()), psi);
}

}  // namespace

std::vector<cplx> JointPureState::amplitudes() const {
  std::vector<cplx> out;
  const auto d = static_cast<std::size_t>(marker_dim);
  out.reserve(2 * d);
  for (std::size_t i = 0; i < d; ++i) out.push_back(c0 * psi0[i]);
  for (std::size_t i = 0; i < d; ++i) out.push_back(c1 * psi1[i]);
  return out;
}

JointPureState joint_state(cplx c0, cplx c1, const CVec<4>& psi0, const CVec<4>& psi1) {
  if (!unit_norm(std::norm(c0) + std::norm(c1)))
    throw NormalizationError("path amplitudes must satisfy |c0|^2 + |c1|^2 = 1");
  if (!unit_norm(std::real(inner(psi0, psi0))) || !unit_norm(std::real(inner(psi1, psi1))))
    throw NormalizationError("marker states must be normalized");
  return {c0, c1, psi0, psi1, 4};
}

JointPureState joint_state(cplx c0, cplx c1, const CVec<2>& psi0, const CVec<2>& psi1) {
  JointPureState s = joint_state(c0, c1, CVec<4>{psi0[0], psi0[1], 0.0, 0.0},
                                 CVec<4>{psi1[0], psi1[1], 0.0, 0.0});
  s.marker_dim = 2;
  return s;
}

CMat2 path_density(const JointPureState& s) {
  const cplx coh = s.c0 * std::conj(s.c1) * inner(s.psi1, s.psi0);
  return CMat2{std::norm(s.c0), coh, std::conj(coh), std::norm(s.c1)};
}

TrialityReport triality_report(const JointPureState& s) {
  TrialityReport r;
  const CMat2 rho = path_density(s);
  r.V = std::abs(2.0 * s.c0 * s.c1 * inner(s.psi0, s.psi1));
  r.D_P = std::abs(std::norm(s.c0) - std::norm(s.c1));
  r.purity = std::real(trace(rho * rho));
  r.P = std::sqrt(std::max(0.0, 2.0 * r.purity - 1.0));
  r.C = std::sqrt(std::max(0.0, 2.0 * (1.0 - r.purity)));
  r.pct_residual = r.V * r.V + r.D_P * r.D_P - r.P * r.P;
  r.complement_residual = r.C * r.C + r.P * r.P - 1.0;
  r.triality_residual = r.V * r.V + r.D_P * r.D_P + r.C * r.C - 1.0;
  return r;
}

CMat2 marker_density(const CVec<4>& psi) {
  return partial_trace(outer(psi, psi), Subsystem::first);
}

PurifiedWWM purify_decomposition(const std::array<double, 2>& weight,
                                 const std::array<PureJones, 2>& phi0, const CMat2& u) {
  if (!is_unitary(u)) throw NonUnitary("purification needs a unitary marker operation");
  if (weight[0] < 0.0 || weight[1] < 0.0 || !unit_norm(weight[0] + weight[1]))
    throw NormalizationError("decomposition weights must be non-negative and sum to 1");
  PurifiedWWM p;
  p.weight = weight;
  p.phi0 = phi0;
  p.env = {CVec<2>{1.0, 0.0}, CVec<2>{0.0, 1.0}};
  p.u = u;
  p.psi0 = {};
  for (int j = 0; j < 2; ++j) {
    p.phi1[j] = {wpd::apply(u, phi0[j].amplitude)};
    p.psi0 = sum(p.psi0, scaled(kron(phi0[j].amplitude, p.env[j]), p.c(j)));
  }
  p.psi1 = apply_marker(u, p.psi0);
  return p;
}

PurifiedWWM purify(const PolDensity& rho0, const CMat2& u, const std::optional<CMat2>& e_rotation) {
  const PolEigen eig = eigendecompose_pol(rho0);
  PurifiedWWM p = purify_decomposition({eig.p_major, eig.p_minor}, {eig.major, eig.minor}, u);
  if (!e_rotation) return p;

  const CMat2& r = *e_rotation;
  if (!is_unitary(r)) throw NonUnitary("E-basis rotation must be unitary");
  // Project the unchanged global state onto the new E basis f_j = R e_j.
  const CVec<4> psi = p.psi0;
  for (int j = 0; j < 2; ++j) {
    const CVec<2> f{r(0, j), r(1, j)};
    CVec<2> chi{};
    for (std::size_t w = 0; w < 2; ++w)
      chi[w] = std::conj(f[0]) * psi[2 * w] + std::conj(f[1]) * psi[2 * w + 1];
    const double n = norm(chi);
    p.env[j] = f;
    p.weight[j] = n * n;
    p.phi0[j] = PureJones{n > 1e-15 ? scaled(chi, 1.0 / n) : CVec<2>{1.0, 0.0}};
  }
  // Weights come from a projection, so renormalize away rounding.
  const double total = p.weight[0] + p.weight[1];
  p.weight = {p.weight[0] / total, p.weight[1] / total};
  p.psi0 = {};
  for (int j = 0; j < 2; ++j) {
    p.phi1[j] = {wpd::apply(u, p.phi0[j].amplitude)};
    p.psi0 = sum(p.psi0, scaled(kron(p.phi0[j].amplitude, p.env[j]), p.c(j)));
  }
  p.psi1 = apply_marker(u, p.psi0);
  return p;
}

JointVCD joint_vcd(const PurifiedWWM& p) {
  JointVCD out;
  out.V = std::min(1.0, std::abs(inner(p.psi0, p.psi1)));
  out.D = std::sqrt(std::max(0.0, 1.0 - out.V * out.V));
  out.C = out.D;
  return out;
}

DeltaEigen delta_eigensystem(const PurifiedWWM& p) {
  DeltaEigen out;
  const cplx a = inner(p.psi0, p.psi1);
  if (1.0 - std::abs(a) <= kNormTol) {
    out.degenerate = true;
    return out;
  }
  // Frame f0 = psi0, f1 = (psi1 - a psi0) / b, so psi1 = a f0 + b f1.
  const CVec<4> w = sum(p.psi1, scaled(p.psi0, -a));
  const double b = norm(w);
  const CVec<4> f1 = scaled(w, 1.0 / b);
  const CMat2 delta{1.0 - std::norm(a), -a * b, -std::conj(a) * b, -b * b};
  const HermEig2 eig = herm_eig2(delta);
  const auto lift = [&](const CVec<2>& v) { return sum(scaled(p.psi0, v[0]), scaled(f1, v[1])); };
  out.D = std::max(0.0, eig.values[0]);
  out.psi_plus = lift(eig.vectors[0]);
  out.psi_minus = lift(eig.vectors[1]);

  const CMat4 delta4 = outer(p.psi0, p.psi0) - outer(p.psi1, p.psi1);
  const double check = 0.5 * (std::real(expectation(delta4, out.psi_plus)) -
                               std::real(expectation(delta4, out.psi_minus)));
  if (std::abs(check - out.D) > 1e-10)
    throw InternalCheckFailure("Tr(Pi_D Delta) disagrees with the span eigenvalue");
  return out;
}

double m_operator_value(const PurifiedWWM& p) {
  CMat4 m = CMat4::zero();
  for (int j = 0; j < 2; ++j) {
    if (p.weight[j] <= 0.0) continue;
    const PiDPure branch = pi_d_pure(p.phi0[j], p.phi1[j]);
    const CMat2 half_diff =
        0.5 * (branch.phi_plus.projector() - branch.phi_minus.projector());
    m += tensor2x2(half_diff, outer(p.env[j], p.env[j]));
  }
  return std::real(expectation(m, p.psi0)) - std::real(expectation(m, p.psi1));
}

PiDPure pi_d_pure(const PureJones& phi0, const PureJones& phi1) {
  PiDPure out;
  const double overlap = std::abs(inner(phi0.amplitude, phi1.amplitude));
  if (1.0 - overlap <= kNormTol) {
    out.degenerate = true;
    out.phi_plus = phi0;
    out.phi_minus = {orthogonal(phi0.amplitude)};
    return out;
  }
  const CMat2 pi0 = phi0.projector();
  const CMat2 pi1 = phi1.projector();
  const HermEig2 eig = herm_eig2(pi0 - pi1);
  out.D = std::sqrt(std::max(0.0, 1.0 - overlap * overlap));
  out.phi_plus = {eig.vectors[0]};
  out.phi_minus = {eig.vectors[1]};
  const double check = std::real(expectation(pi0, out.phi_plus.amplitude)) +
                       std::real(expectation(pi1, out.phi_minus.amplitude)) - 1.0;
  if (std::abs(check - out.D) > 1e-12)
    throw InternalCheckFailure("projective identity for pi_D fails");
  return out;
}

}  // namespace wpd
