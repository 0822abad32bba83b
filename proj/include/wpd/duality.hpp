#pragma once

// Visibility and path-distinguishability functionals for a two-path
// interferometer whose which-way marker is the photon polarization.
//
// The inter-path unitary U_S is written in Euler-Rodrigues form
// U_S = e0 sigma0 + i e.sigma with e0 = cos(Omega/2), e = sin(Omega/2) n.
// With s the input Stokes vector:
//   V   = sqrt(e0^2 + (e.s)^2)
//   D_c = sqrt(|e|^2 |s|^2 - (e.s)^2)     (trace distance of the path states)
//   D   = sqrt(|e|^2 - (e.s)^2)           (purification-aware distinguishability)
// so V^2 + D^2 = 1 for every input while V^2 + D_c^2 <= 1.

#include <cstdint>
#include <string>
#include <utility>

#include "wpd/interferometer.hpp"
#include "wpd/parallel.hpp"
#include "wpd/polarization.hpp"

namespace wpd {

struct RotationSpec {
  double e0 = 1.0;              ///< >= 0 by branch choice
  Vec3 e{0.0, 0.0, 0.0};
  Vec3 axis{0.0, 1.0, 0.0};     ///< (0,1,0) when |e| ~ 0
  double omega = 0.0;           ///< radians, in [0, pi] given e0 >= 0
};

/// Strip the global phase (branch with real, non-negative trace) and read
/// off the Euler-Rodrigues parameters. Throws NonUnitary.
RotationSpec su2_decompose(const CMat2& u);
/// e0 sigma0 + i e.sigma
CMat2 su2_matrix(const RotationSpec& rot);

/// U_S = U_R(theta0)^dagger U~_R(theta1).
CMat2 inter_path_unitary(const InterferometerConfig& cfg);

double visibility_stokes(const RotationSpec& rot, const StokesVector& s);
double dc_stokes(const RotationSpec& rot, const StokesVector& s);
/// Half the trace norm of rho0 - rho1.
double dc_trace_distance(const PolDensity& rho0, const PolDensity& rho1);
double d_general(const RotationSpec& rot, const StokesVector& s);

/// Pure-state distinguishability sqrt(1 - |<phi|U|phi>|^2).
double d_pure(const PureJones& phi, const CMat2& u);

struct DecompositionResult {
  Vec3 s_alpha{0.0, 0.0, 1.0};
  Vec3 s_beta{0.0, 0.0, -1.0};
  double p_alpha = 1.0;
  double p_beta = 0.0;
};

/// Split s into two pure states that share the height n.s along the
/// rotation axis. The chord is the diameter of that latitude circle through
/// s; when s sits on the axis the chord direction falls back to (0,0,1)
/// (or (1,0,0)) projected into the plane normal to n.
DecompositionResult decompose_for_axis(const StokesVector& s, const Vec3& axis);

/// p_alpha D(s_alpha) + p_beta D(s_beta) evaluated on Jones vectors.
double d_via_decomposition(const CMat2& u_s, const StokesVector& s);
/// Both branch values, for checking they coincide.
std::pair<double, double> d_branches(const CMat2& u_s, const StokesVector& s);

struct MeasurementBasis {
  PureJones plus;
  PureJones minus;
};

/// Basis whose "plus" vector has the Stokes direction m.
MeasurementBasis basis_from_axis(const Vec3& m);

/// Likelihood of the which-way guess with projective measurement w.
/// Throws NonOrthonormalBasis.
double likelihood(const MeasurementBasis& w, const PolDensity& rho0, const PolDensity& rho1);

struct LikelihoodSearch {
  double l_max = 0.5;
  MeasurementBasis best;
  Vec3 best_axis{0.0, 0.0, 1.0};
};

/// Randomized search over measurement axes (uniform on the sphere), then
/// golden-section refinement of the best candidate. Verification oracle for
/// the trace distance: 2 L_max - 1 -> D_c. Deterministic in (seed, trials);
/// the parallel path splits trials into fixed blocks and merges by max.
LikelihoodSearch max_likelihood_search(const PolDensity& rho0, const PolDensity& rho1,
                                       std::size_t trials, std::uint64_t seed,
                                       Exec exec = Exec::parallel);

/// Minimum error probability (1 - D) / 2. Throws RangeError outside [0,1].
double helstrom_bound(double d);

struct DualityReport {
  double V = 0.0;
  double D_c = 0.0;
  double D = 0.0;
  double D_P = 0.0;
  double C_we = 0.0;
  double sum_VD = 0.0;
  double sum_VDc = 0.0;
};

/// Every functional for one configuration. The matrix routes (C_i,
/// conditional-output trace distance, decomposition) are cross-checked
/// against the Stokes closed forms; a mismatch throws InternalCheckFailure.
DualityReport duality_report(const InterferometerConfig& cfg, const StokesVector& s);

enum class DualityCase { a, b, c, d, e, f };

/// Pure (|s|=1): s2=0 -> a, 0<|s2|<1 -> b, |s2|=1 -> c.
/// Mixed: s2=0 -> d, 0<|s2|<|s| -> e, |s2|=|s| -> f. Tolerance 1e-9.
DualityCase classify_case(const StokesVector& s);
char case_letter(DualityCase c);

}  // namespace wpd
