#pragma once

// Scenario runners behind the wpd_lab subcommands. Each returns the CSV
// document (provenance header included) plus summary lines; nothing here
// touches the filesystem.

#include <string>
#include <vector>

#include "wpd/cli/config.hpp"
#include "wpd/parallel.hpp"

namespace wpd::cli {

inline constexpr const char* kVersion = "0.1.0";

struct Report {
  std::string csv;
  std::vector<std::string> summary;
  std::vector<std::string> gate_failures;  ///< empty when every gate passes

  bool gates_ok() const { return gate_failures.empty(); }
};

/// '#'-prefixed lines: tool version, command, seed, rng algorithm, config hash.
std::string provenance_header(const RunConfig& cfg);

/// theta0_deg,theta1_deg,s1,s2,s3,case,V,Dc,D,V2_plus_D2,V2_plus_Dc2
Report run_sweep(const RunConfig& cfg, Exec exec = Exec::parallel);
/// Fringe table over the delta grid at the first theta1.
Report run_fringe(const RunConfig& cfg, Exec exec = Exec::parallel);

struct ErasureFit {
  double theta1_deg = 0.0;
  std::string channel;  ///< out1, apd10, apd11
  double visibility = 0.0;
  double phase = 0.0;
};

/// Fitted visibility and phase of OUT1 and the circular-analyzer detectors.
std::vector<ErasureFit> erasure_fits(const RunConfig& cfg);
/// theta1_deg,phi_rad,p_out0,p_out1,p_apd10,p_apd11 per theta1, with the
/// fits appended as '# fit' comment lines.
Report run_erasure(const RunConfig& cfg);

/// Monte Carlo V and D with CIs beside the analytic values; gate: every
/// |V^2 + D^2 - 1| within 3 combined sigma.
Report run_wpd_verify(const RunConfig& cfg, Exec exec = Exec::parallel);
/// setting_id,theta1_deg,branch,N00,N01,N10,N11,estimate,ci_low,ci_high,seed,rng_algo
Report run_montecarlo(const RunConfig& cfg, Exec exec = Exec::parallel);
/// Three-basis tomography of the first configured Stokes vector.
Report run_tomography(const RunConfig& cfg, Exec exec = Exec::parallel);

Report run(const RunConfig& cfg, Exec exec = Exec::parallel);

enum class PlotKind { sweep, erasure, montecarlo, wpd_verify };

/// Throws ConfigError for an unknown kind.
PlotKind parse_plot_kind(std::string_view name);

/// Standalone matplotlib script that reads `csv_relpath` relative to the
/// script's own directory.
std::string emit_plot_script(PlotKind kind, const std::string& csv_relpath);

}  // namespace wpd::cli
