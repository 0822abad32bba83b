#pragma once

// Michelson interferometer with a polarization rotator in each arm.
//
// Joint space is path (x) polarization, basis |0H>,|0V>,|1H>,|1V>. Photons
// enter through path 0. The non-polarizing beamsplitter reflects H and V
// with opposite signs (Fresnel coordinates), which is why outputs reached
// through a reflection see sigma3-conjugated polarization.

#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "wpd/linalg.hpp"
#include "wpd/parallel.hpp"
#include "wpd/polarization.hpp"
#include "wpd/units.hpp"

namespace wpd {

enum class Block { none, block0, block1 };

struct InterferometerConfig {
  double theta0_deg = 0.0;      ///< fast axis of the path-0 rotator QWP
  double theta1_deg = 0.0;      ///< fast axis of the path-1 rotator QWP
  double phase_phi = 0.0;       ///< radians, added to path 0
  Block block = Block::none;
  /// Stand-in for every unmodeled imperfection: multiplies the interference
  /// (cross-path) term only.
  double visibility_scale = 1.0;

  /// Throws RangeError for a non-finite phase or a scale outside (0, 1].
  void validate() const;
};

enum class SpectralShape { monochromatic, rectangular };

struct SpectralModel {
  double center_wavelength_nm = 679.0;
  double bandwidth_nm = 0.0;
  SpectralShape shape = SpectralShape::monochromatic;

  void validate() const;
  /// l_c in micrometres such that the fringe envelope is sin(x)/x with
  /// x = (delta - delta0) / l_c, i.e. l_c = lambda0^2 / (2 pi dlambda).
  /// Infinite for a monochromatic source.
  double coherence_length_um() const;
};

enum class Detector { transmit, reflect };

/// HWP then QWP then PBS. The transmitted arm of PBS passes H.
struct AnalyzerSetting {
  double hwp_angle_deg = 0.0;
  double qwp_angle_deg = 0.0;
  bool enabled = true;

  /// Circular basis: the s2 = +1 state is transmitted.
  static AnalyzerSetting circular() { return {0.0, 45.0, true}; }
};

// ---- optical elements ---------------------------------------------------

CMat2 jones_qwp(Angle theta);
CMat2 jones_hwp(Angle theta);
CMat2 jones_mirror();

/// (1/sqrt2) [[sigma0, i sigma3], [i sigma3, sigma0]] in the joint basis.
CMat4 npbs_unitary();

/// Double-pass QWP plus retroreflector: U_QWP(-theta) M U_QWP(theta). Acts
/// on Stokes vectors as a rotation by 4 theta about (0,1,0).
CMat2 retro_rotator(Angle theta);
/// sigma3 U_R(theta) sigma3, the rotator seen from the reflected frame.
CMat2 retro_rotator_flipped(Angle theta);

/// e^{i phi}|0><0| (x) U_R(theta0) + |1><1| (x) U_R(theta1). A blocked path
/// has its block zeroed.
CMat4 path_unitary(const InterferometerConfig& cfg);

/// U_BS^dagger U_W U_BS. Throws BlockedPath when cfg.block != none.
CMat4 interferometer_unitary(const InterferometerConfig& cfg);

/// U_BS^dagger U_W U_BS with blocking applied; not unitary when blocked.
CMat4 transfer_matrix(const InterferometerConfig& cfg);

// ---- output states ------------------------------------------------------

struct PortOutput {
  double prob = 0.0;
  PolDensity state = unpolarized();
};

/// Unnormalized polarization operator at an output port. `coherence`
/// multiplies the cross-path term (1 = fully coherent, 0 = incoherent sum
/// of the two single-path contributions).
CMat2 output_matrix(const InterferometerConfig& cfg, const PolDensity& rho_in, int port,
                    double coherence);

/// Probability and normalized state at `port` (0 or 1), including the
/// configured visibility_scale. Throws ZeroProbability below 1e-15.
PortOutput output_density(const InterferometerConfig& cfg, const PolDensity& rho_in, int port);

/// C_i = Tr[U_R(theta0) rho U~_R(theta1)^dagger].
cplx interference_coefficient(const InterferometerConfig& cfg, const PolDensity& rho_in);

/// Port intensity predicted from C_i:
/// 1/2 [1 + v |C| cos(phi + arg C)] at port 0, and 1/2 [1 - ...] at port 1.
double port_intensity_from_coefficient(cplx c, double phi, int port, double visibility_scale = 1.0);

/// Output at `port` when only `open_path` is open. Probability is 1/4 for
/// any input.
PortOutput conditional_output(const InterferometerConfig& cfg, const PolDensity& rho_in,
                              int open_path, int port);

// ---- analyzers ----------------------------------------------------------

/// Projector measured by `det` after HWP(hwp)·QWP(qwp) ordering of the
/// analyzer (HWP first in the beam).
CMat2 analyzer_projector(const AnalyzerSetting& a, Detector det);
/// Born probability for a normalized state.
double analyzer_probability(const PolDensity& rho_port, const AnalyzerSetting& a, Detector det);
/// Same for an unnormalized operator, giving a joint probability.
double analyzer_weight(const CMat2& unnormalized, const AnalyzerSetting& a, Detector det);

// ---- fringes ------------------------------------------------------------

/// Round-trip phase 2 pi (2 delta) / lambda0 for a single-arm displacement
/// delta (micrometres).
double phase_from_delta(double delta_um, double center_wavelength_nm);

/// Fringe envelope sin(x)/x with x = delta / l_c; 1 for a monochromatic source.
double envelope_factor(double delta_um, const SpectralModel& spectral);

double sinc(double x);

struct FringeRow {
  double delta_um = 0.0;
  double phi_rad = 0.0;
  double p_out0 = 0.0;
  double p_out1 = 0.0;
  double p_apd10 = 0.0;  ///< OUT1 analyzer, transmit arm
  double p_apd11 = 0.0;  ///< OUT1 analyzer, reflect arm
};

struct FringeTable {
  bool has_analyzer = false;
  std::vector<FringeRow> rows;
};

FringeTable fringe_scan(const InterferometerConfig& cfg, const PolDensity& rho_in,
                        const SpectralModel& spectral, std::span<const double> delta_grid_um,
                        const std::optional<AnalyzerSetting>& analyzer = std::nullopt,
                        Exec exec = Exec::parallel);

/// Columns delta_um,phi_rad,p_out0,p_out1[,p_apd10,p_apd11].
void write_fringe_csv(std::ostream& os, const FringeTable& table);

// ---- fits ---------------------------------------------------------------

struct VisibilityFit {
  double visibility = 0.0;
  double phase = 0.0;  ///< psi in I ~ 1 + V cos(phi + psi)
};

/// Fourier-quotient visibility 2|sum I e^{-i phi}| / sum I. Expects at least
/// 8 samples on a uniform grid covering whole periods.
VisibilityFit fit_visibility(std::span<const double> phi, std::span<const double> intensity);

struct FringeParams {
  double amplitude = 1.0;    ///< A
  double visibility = 1.0;   ///< V
  double delta0_um = 0.0;
  double coherence_um = 1.0; ///< l_c
};

/// A (1 + V sinc((delta - delta0) / l_c)).
double envelope_model(const FringeParams& p, double delta_um);

struct FringeFit {
  FringeParams params;
  FringeParams std_error;
  int iterations = 0;
  double chi2 = 0.0;
};

/// Weighted least-squares fit of envelope_model. `sigma` may be empty for
/// unit weights (then the reported errors are scaled by the residual
/// variance). Throws NonConvergence after 200 iterations.
FringeFit fit_fringe(std::span<const double> delta_um, std::span<const double> y,
                     std::span<const double> sigma = {});

}  // namespace wpd
