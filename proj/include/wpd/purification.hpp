#pragma once

// Pure joint states over path (x) marker, and the purification of a mixed
// marker state into marker (x) environment. The environment is one
// effective qubit. Joint vectors over W (x) E use index 2 w + e.

#include <array>
#include <cmath>
#include <optional>
#include <vector>

#include "wpd/linalg.hpp"
#include "wpd/polarization.hpp"

namespace wpd {

/// c0 |0>|psi0> + c1 |1>|psi1>. The marker has dimension 2 or 4; the
/// 2-dimensional case keeps the upper half of psi0/psi1 and zeros below.
struct JointPureState {
  cplx c0{1.0, 0.0};
  cplx c1{0.0, 0.0};
  CVec<4> psi0{};
  CVec<4> psi1{};
  int marker_dim = 2;

  /// Full amplitude vector, path-major: first marker_dim entries for path 0.
  std::vector<cplx> amplitudes() const;
};

/// Throws NormalizationError unless |c0|^2 + |c1|^2 = 1 and both marker
/// vectors are normalized (1e-12).
JointPureState joint_state(cplx c0, cplx c1, const CVec<2>& psi0, const CVec<2>& psi1);
JointPureState joint_state(cplx c0, cplx c1, const CVec<4>& psi0, const CVec<4>& psi1);

/// Reduced path density [[|c0|^2, c0 c1* <psi1|psi0>], [.., |c1|^2]].
CMat2 path_density(const JointPureState& s);

struct TrialityReport {
  double V = 0.0;
  double D_P = 0.0;
  double C = 0.0;
  double P = 0.0;
  double purity = 1.0;      ///< gamma of the reduced path state
  double pct_residual = 0.0;       ///< V^2 + D_P^2 - P^2
  double complement_residual = 0.0;  ///< C^2 + P^2 - 1
  double triality_residual = 0.0;  ///< V^2 + D_P^2 + C^2 - 1
};

TrialityReport triality_report(const JointPureState& s);

struct PurifiedWWM {
  std::array<double, 2> weight{1.0, 0.0};  ///< |c_alpha|^2, |c_beta|^2
  std::array<PureJones, 2> phi0{};         ///< branch states entering path 0
  std::array<PureJones, 2> phi1{};         ///< U phi0
  std::array<CVec<2>, 2> env{};            ///< E basis |alpha>, |beta>
  CVec<4> psi0{};
  CVec<4> psi1{};                          ///< (U (x) I) psi0
  CMat2 u = CMat2::identity();

  double c(int branch) const { return std::sqrt(weight[branch]); }
};

/// Purify from the spectral decomposition of rho0 (|alpha> = (1,0),
/// |beta> = (0,1)). With `e_rotation` R the same global state is re-expressed
/// in the E basis R|alpha>, R|beta>, which changes the branch states to a
/// different pure-state decomposition of rho0. Throws NonUnitary.
PurifiedWWM purify(const PolDensity& rho0, const CMat2& u,
                   const std::optional<CMat2>& e_rotation = std::nullopt);

/// Purify from an explicit decomposition sum_j p_j |phi_j><phi_j| using the
/// standard E basis. Throws NormalizationError if the weights do not sum to 1.
PurifiedWWM purify_decomposition(const std::array<double, 2>& weight,
                                 const std::array<PureJones, 2>& phi0, const CMat2& u);

/// Tr_E |psi><psi| over W (x) E.
CMat2 marker_density(const CVec<4>& psi);

struct JointVCD {
  double V = 1.0;
  double C = 0.0;
  double D = 0.0;
};

/// V = |<psi0|psi1>|, C = D = sqrt(1 - V^2).
JointVCD joint_vcd(const PurifiedWWM& p);

struct DeltaEigen {
  double D = 0.0;
  CVec<4> psi_plus{};
  CVec<4> psi_minus{};
  bool degenerate = false;  ///< psi0 = psi1 up to phase; eigenvectors unset
};

/// Eigensystem of |psi0><psi0| - |psi1><psi1| solved in span{psi0, psi1}.
/// Throws InternalCheckFailure if Tr(Pi_D Delta) misses D by more than 1e-10.
DeltaEigen delta_eigensystem(const PurifiedWWM& p);

/// Tr(M Delta) for the joint operator built from per-branch eigenvectors.
double m_operator_value(const PurifiedWWM& p);

struct PiDPure {
  double D = 0.0;
  PureJones phi_plus;
  PureJones phi_minus;
  bool degenerate = false;
};

/// Eigenvectors of pi0 - pi1 for two pure marker states, D = sqrt(1 -
/// |<phi0|phi1>|^2). Throws InternalCheckFailure if the projective
/// identity misses D by more than 1e-12.
PiDPure pi_d_pure(const PureJones& phi0, const PureJones& phi1);

}  // namespace wpd
