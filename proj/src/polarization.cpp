#include "wpd/polarization.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <string>

#include "wpd/errors.hpp"

namespace wpd {

double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }
Vec3 operator+(const Vec3& a, const Vec3& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2]}; }
Vec3 operator-(const Vec3& a, const Vec3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
Vec3 operator*(double s, const Vec3& a) { return {s * a[0], s * a[1], s * a[2]}; }

double StokesVector::norm() const { return wpd::norm(vec()); }

StokesVector parse_stokes(std::string_view text) {
  std::array<double, 3> v{};
  std::size_t pos = 0;
  for (int k = 0; k < 3; ++k) {
    const auto comma = text.find(',', pos);
    if ((k < 2) != (comma != std::string_view::npos))
      throw ConfigError("stokes vector must be three comma-separated numbers, got '" +
                        std::string(text) + "'");
    auto field = text.substr(pos, k < 2 ? comma - pos : std::string_view::npos);
    while (!field.empty() && field.front() == ' ') field.remove_prefix(1);
    while (!field.empty() && field.back() == ' ') field.remove_suffix(1);
    const auto res = std::from_chars(field.data(), field.data() + field.size(), v[k]);
    if (res.ec != std::errc{} || res.ptr != field.data() + field.size() || !std::isfinite(v[k]))
      throw ConfigError("bad stokes component '" + std::string(field) + "'");
    pos = comma + 1;
  }
  return {v[0], v[1], v[2]};
}

std::string format_stokes(const StokesVector& s) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "%.10g,%.10g,%.10g", s.s1, s.s2, s.s3);
  return buf;
}

StokesVector clip_to_ball(const StokesVector& s) {
  const double n = s.norm();
  if (n <= 1.0) return s;
  return StokesVector::from((1.0 / n) * s.vec());
}

PolDensity PolDensity::from_matrix(const CMat2& m) {
  if (!m.all_finite()) throw InvalidState("density matrix has non-finite entries");
  if (!is_hermitian(m)) throw InvalidState("density matrix is not Hermitian");
  if (std::abs(trace(m) - 1.0) > kTagTolerance) throw InvalidState("density matrix trace != 1");
  if (herm_eig2(m).values[1] < -kTagTolerance) throw InvalidState("density matrix is not positive");
  return PolDensity(m);
}

PureJones PureJones::from(const CVec<2>& v) {
  if (std::abs(norm(v) - 1.0) > kTagTolerance) throw NormalizationError("Jones vector is not unit norm");
  return PureJones{v};
}

PolDensity density_from_stokes(const StokesVector& s) {
  if (!std::isfinite(s.s1) || !std::isfinite(s.s2) || !std::isfinite(s.s3))
    throw InvalidState("non-finite Stokes vector");
  if (s.norm() > 1.0 + kTagTolerance) throw InvalidState("Stokes vector outside the unit ball");
  CMat2 m = sigma0() + s.s1 * sigma1() + s.s2 * sigma2() + s.s3 * sigma3();
  m *= 0.5;
  return PolDensity::from_matrix(m);
}

Vec3 stokes_of_matrix(const CMat2& m) {
  return {trace(sigma1() * m).real(), trace(sigma2() * m).real(), trace(sigma3() * m).real()};
}

StokesVector stokes_from_density(const PolDensity& rho) {
  return StokesVector::from(stokes_of_matrix(rho.matrix()));
}

PolDensity unpolarized() { return density_from_stokes({0.0, 0.0, 0.0}); }

double purity(const PolDensity& rho) { return trace(rho.matrix() * rho.matrix()).real(); }

double degree_of_polarization(const PolDensity& rho) { return stokes_from_density(rho).norm(); }

double concurrence_we(const PolDensity& rho) {
  const double s = degree_of_polarization(rho);
  return std::sqrt(std::max(0.0, 1.0 - s * s));
}

double fidelity(const PolDensity& rho, const PolDensity& tau) {
  const auto det = [](const CMat2& m) {
    return (m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0)).real();
  };
  const double overlap = trace(rho.matrix() * tau.matrix()).real();
  const double dd = std::max(0.0, det(rho.matrix()) * det(tau.matrix()));
  return std::min(1.0, overlap + 2.0 * std::sqrt(dd));
}

PolEigen eigendecompose_pol(const PolDensity& rho) {
  const auto e = herm_eig2(rho.matrix());
  PolEigen out;
  out.p_major = std::max(0.0, e.values[0]);
  out.p_minor = std::max(0.0, e.values[1]);
  out.major = PureJones{e.vectors[0]};
  out.minor = PureJones{e.vectors[1]};
  return out;
}

PureJones jones_from_stokes(const Vec3& s) {
  const double n = norm(s);
  if (n == 0.0) return PureJones::horizontal();
  const Vec3 u = (1.0 / n) * s;
  // rho_HH = (1+s3)/2, rho_HV = (s1 - i s2)/2 = a_H conj(a_V).
  CVec<2> v;
  if (u[2] >= 0.0) {
    const double aH = std::sqrt(0.5 * (1.0 + u[2]));
    v = {aH, cplx(u[0], u[1]) / (2.0 * aH)};
  } else {
    const double aV = std::sqrt(0.5 * (1.0 - u[2]));
    v = {cplx(u[0], -u[1]) / (2.0 * aV), aV};
  }
  return PureJones{fix_phase(normalized(v))};
}

Vec3 stokes_of(const PureJones& v) { return stokes_of_matrix(v.projector()); }

Mat3 stokes_rotation(const CMat2& u) {
  Mat3 r{};
  const CMat2 ud = adjoint(u);
  for (int j = 0; j < 3; ++j) {
    const Vec3 col = stokes_of_matrix(u * pauli(j + 1) * ud);
    for (int i = 0; i < 3; ++i) r[i][j] = 0.5 * col[i];
  }
  return r;
}

Vec3 apply(const Mat3& r, const Vec3& v) { return {dot(r[0], v), dot(r[1], v), dot(r[2], v)}; }

PolDensity rotate(const PolDensity& rho, const CMat2& u) {
  CMat2 m = u * rho.matrix() * adjoint(u);
  // Re-symmetrize to keep the Hermitian tag exact after rounding.
  m = 0.5 * (m + adjoint(m));
  return PolDensity::from_matrix(m);
}

}  // namespace wpd
