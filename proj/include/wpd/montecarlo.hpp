#pragma once

// Photon-counting simulation of the which-way experiment and the estimators
// applied to the counts.
//
// Counts are conditioned on the number of photons detected per setting
// (exposure fluctuations are not modeled). The multinomial draw over
// detectors is generated as a chain of binomials, which has the same
// distribution as drawing each photon independently.

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "wpd/interferometer.hpp"
#include "wpd/parallel.hpp"
#include "wpd/polarization.hpp"
#include "wpd/rng.hpp"

namespace wpd {

/// n[p][d]: photons counted with only path p open, at detector d of the
/// OUT1 analyzer (d = 0 is APD10 on the transmit arm, d = 1 is APD11).
struct CountRecord {
  std::array<std::array<std::uint64_t, 2>, 2> n{};

  std::uint64_t total() const { return n[0][0] + n[0][1] + n[1][0] + n[1][1]; }
  std::uint64_t path_total(int p) const { return n[p][0] + n[p][1]; }
  bool operator==(const CountRecord&) const = default;
};

struct EstimateWithCI {
  double value = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  double level = 0.95;
  std::vector<double> replicates;  ///< bootstrap replicates, possibly empty

  /// Standard deviation of the replicates (0 without replicates).
  double sigma() const;
};

struct BootstrapOptions {
  std::size_t resamples = 2000;  ///< 0 skips the bootstrap
  double level = 0.95;
  Exec exec = Exec::parallel;
};

/// Multinomial counts over `probs` (normalized internally). Throws
/// RangeError for negative or all-zero probabilities.
std::vector<std::uint64_t> sample_multinomial(std::span<const double> probs, std::uint64_t n,
                                              RngStream& rng);

/// Draw `photons` detections per open path at OUT1 through `analyzer`.
/// Throws RangeError if photons < 1.
CountRecord sample_counts(const InterferometerConfig& cfg, const PolDensity& rho_in,
                          const AnalyzerSetting& analyzer, std::uint64_t photons,
                          RngStream& rng);

/// Plug-in likelihood (max_p N_p,10 + max_p N_p,11) / total.
double likelihood_from_counts(const CountRecord& c);

/// Plug-in estimate with a percentile bootstrap over per-photon outcomes
/// (each path's photons resampled independently). Throws EmptyCounts.
EstimateWithCI estimate_likelihood(const CountRecord& counts, RngStream& rng,
                                   const BootstrapOptions& opts = {});

/// Analyzer maximizing the which-way likelihood for an H (branch 0) or V
/// (branch 1) input: HWP at -theta1/2 + 22.5 deg (67.5 deg for V), QWP at 0.
AnalyzerSetting optimal_branch_analyzer(double theta1_deg, int branch);

struct DecomposedD {
  EstimateWithCI d;
  std::array<EstimateWithCI, 2> likelihood;  ///< H branch, V branch
  std::array<CountRecord, 2> counts;
  std::array<double, 2> weight{};            ///< (1 + s3)/2, (1 - s3)/2
};

/// D from the H/V decomposition of the source: two pure-input experiments
/// at the optimal analyzers, D = sum_j p_j (2 L_j - 1). photons_per_branch
/// is split evenly between the two open-path settings. Throws RangeError
/// unless s lies on the H/V axis (s1 = s2 = 0), where that decomposition is
/// the equal-overlap one.
DecomposedD estimate_D_decomposed(const InterferometerConfig& cfg, const StokesVector& source,
                                  std::uint64_t photons_per_branch, RngStream& rng,
                                  const BootstrapOptions& opts = {});

struct VisibilityMC {
  EstimateWithCI v;
  std::vector<std::uint64_t> counts;  ///< OUT1 counts per phase point
};

/// Binomial OUT1 counts at each phase, then the Fourier visibility.
/// Bootstrap resamples every point binomially. Throws RangeError for fewer
/// than 8 points.
VisibilityMC estimate_visibility_mc(const InterferometerConfig& cfg, const PolDensity& rho_in,
                                    std::span<const double> phi_grid,
                                    std::uint64_t photons_per_point, RngStream& rng,
                                    const BootstrapOptions& opts = {});

/// Uniform phase grid over one period, `points` samples.
std::vector<double> uniform_phase_grid(std::size_t points);

/// V^2 + D^2 with sigma from the paired bootstrap replicates.
struct Closure {
  double value = 0.0;
  double sigma = 0.0;
};
Closure wpd_closure(const EstimateWithCI& v, const EstimateWithCI& d);

/// Analyzer settings for the Pauli bases; index k measures s_{k+1}.
std::array<AnalyzerSetting, 3> pauli_analyzers();

struct Tomography {
  StokesVector estimate;                 ///< clipped to the unit ball
  std::array<EstimateWithCI, 3> s;       ///< unclipped components
  std::array<std::array<std::uint64_t, 2>, 3> counts{};  ///< [basis][plus, minus]
  EstimateWithCI fidelity_unpolarized;
  double degree_of_polarization = 0.0;
};

/// Three-basis tomography with `photons_per_basis` detections each.
/// Throws RangeError if photons_per_basis < 1.
Tomography tomography(const PolDensity& rho_source, std::uint64_t photons_per_basis,
                      RngStream& rng, const BootstrapOptions& opts = {});

/// Least-squares slope of log(err) against log(n).
double loglog_slope(std::span<const double> n, std::span<const double> err);

}  // namespace wpd
