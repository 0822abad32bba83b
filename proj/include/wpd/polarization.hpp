#pragma once

// Polarization (which-way marker) states: density matrices, Stokes vectors
// and pure Jones vectors in the {|H>, |V>} basis.
//
// Stokes convention: rho = (sigma0 + s1 sigma1 + s2 sigma2 + s3 sigma3) / 2,
// so s3 is the H/V component, s1 the diagonal/antidiagonal component and
// s2 the circular component.

#include <array>
#include <string>
#include <string_view>

#include "wpd/linalg.hpp"

namespace wpd {

using Vec3 = std::array<double, 3>;

double dot(const Vec3& a, const Vec3& b);
Vec3 cross(const Vec3& a, const Vec3& b);
double norm(const Vec3& a);
Vec3 operator+(const Vec3& a, const Vec3& b);
Vec3 operator-(const Vec3& a, const Vec3& b);
Vec3 operator*(double s, const Vec3& a);

struct StokesVector {
  double s1 = 0.0;
  double s2 = 0.0;
  double s3 = 0.0;

  Vec3 vec() const { return {s1, s2, s3}; }
  static StokesVector from(const Vec3& v) { return {v[0], v[1], v[2]}; }
  double norm() const;
};

/// Parse "s1,s2,s3". Throws ConfigError on malformed text.
StokesVector parse_stokes(std::string_view text);
std::string format_stokes(const StokesVector& s);

/// Scale s back onto the unit ball if |s| > 1; used by finite-count
/// estimators that can overshoot.
StokesVector clip_to_ball(const StokesVector& s);

/// A validated polarization density matrix: Hermitian, unit trace, PSD.
class PolDensity {
 public:
  /// Throws InvalidState if m is not a physical density matrix.
  static PolDensity from_matrix(const CMat2& m);

  const CMat2& matrix() const { return m_; }

 private:
  explicit PolDensity(const CMat2& m) : m_(m) {}
  CMat2 m_;
};

struct PureJones {
  CVec<2> amplitude{1.0, 0.0};

  /// Throws NormalizationError unless |v| = 1 within 1e-12.
  static PureJones from(const CVec<2>& v);
  static PureJones horizontal() { return {{1.0, 0.0}}; }
  static PureJones vertical() { return {{0.0, 1.0}}; }

  CMat2 projector() const { return outer(amplitude, amplitude); }
};

PolDensity density_from_stokes(const StokesVector& s);
StokesVector stokes_from_density(const PolDensity& rho);
/// Stokes image of an arbitrary Hermitian 2x2 matrix, s_k = Tr(sigma_k m).
Vec3 stokes_of_matrix(const CMat2& m);

PolDensity unpolarized();

double purity(const PolDensity& rho);
double degree_of_polarization(const PolDensity& rho);
/// Concurrence between the marker and a purifying environment, sqrt(1-|s|^2).
double concurrence_we(const PolDensity& rho);
/// Uhlmann fidelity [Tr sqrt(sqrt(rho) tau sqrt(rho))]^2 via the 2x2 closed
/// form Tr(rho tau) + 2 sqrt(det rho det tau).
double fidelity(const PolDensity& rho, const PolDensity& tau);

struct PolEigen {
  double p_major = 1.0;
  PureJones major;
  double p_minor = 0.0;
  PureJones minor;
};

/// rho = p_major |major><major| + p_minor |minor><minor|. An unpolarized
/// input resolves to the (|H>, |V>) basis.
PolEigen eigendecompose_pol(const PolDensity& rho);

/// Pure Jones vector with the given unit Stokes direction (|s| is ignored
/// beyond its direction; a zero vector maps to |H>).
PureJones jones_from_stokes(const Vec3& s_hat);
Vec3 stokes_of(const PureJones& v);

/// 3x3 rotation induced on Stokes vectors by rho -> U rho U^dagger.
using Mat3 = std::array<Vec3, 3>;
Mat3 stokes_rotation(const CMat2& u);
Vec3 apply(const Mat3& r, const Vec3& v);

/// U rho U^dagger for a unitary U.
PolDensity rotate(const PolDensity& rho, const CMat2& u);

}  // namespace wpd
