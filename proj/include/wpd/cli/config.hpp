#pragma once

// Run configuration for wpd_lab. Sources are applied in order: built-in
// defaults, then a key=value config file, then command-line flags. Every
// source goes through set_field, so the same validation and diagnostics
// apply everywhere. Angles are degrees at this surface.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "wpd/interferometer.hpp"
#include "wpd/polarization.hpp"

namespace wpd::cli {

enum class Mode { sweep, fringe, erasure, wpd_verify, montecarlo, tomography };

std::string_view mode_name(Mode m);
/// Throws ConfigError for an unknown name.
Mode parse_mode(std::string_view name);

/// "x", "start:stop:step" (stop included when hit within 1e-9 steps) or
/// "a,b,c". Throws ConfigError naming `field` on malformed, empty or
/// non-increasing ranges and non-positive steps.
std::vector<double> parse_grid(std::string_view text, std::string_view field);

/// "s1,s2,s3" or several triples separated by ';'.
std::vector<StokesVector> parse_stokes_list(std::string_view text, std::string_view field);

struct RunConfig {
  Mode mode = Mode::sweep;
  double theta0_deg = 0.0;
  std::optional<std::string> theta1;  ///< unset: per-mode default grid
  std::string stokes = "0,0,0";
  double visibility_scale = 1.0;
  double phase_phi = 0.0;
  double center_wavelength_nm = 679.0;
  double bandwidth_nm = 0.0;
  std::string delta = "-30:30:0.1";   ///< micrometres
  std::string analyzer = "none";      ///< none | circular | "hwp,qwp"
  std::uint64_t phase_points = 64;
  std::uint64_t photons = 100000;
  std::uint64_t seed = 1;
  std::uint64_t resamples = 2000;
  std::string out;

  std::string theta1_text() const;
  std::vector<double> theta1_grid() const;
  std::vector<StokesVector> stokes_list() const;
  std::vector<double> delta_grid() const;
  /// Throws ConfigError.
  std::optional<AnalyzerSetting> analyzer_setting() const;
  SpectralModel spectral() const;
  InterferometerConfig interferometer(double theta1_deg) const;

  /// Cross-field checks; throws ConfigError.
  void validate() const;
};

/// Set one key from text. `where` prefixes diagnostics (e.g. "run.cfg:3").
/// Throws ConfigError for unknown keys and bad values.
void set_field(RunConfig& cfg, std::string_view key, std::string_view value,
               std::string_view where);

/// Apply a key=value document. '#' starts a comment; blank lines are
/// ignored. `source` names the document in diagnostics.
void apply_config_text(RunConfig& cfg, std::string_view text, std::string_view source);
/// Throws ConfigError if the file cannot be read.
void apply_config_file(RunConfig& cfg, const std::string& path);

/// Canonical key=value rendering of the effective configuration.
std::string canonical(const RunConfig& cfg);
/// FNV-1a 64 of canonical(cfg), as 16 hex digits.
std::string config_hash(const RunConfig& cfg);

}  // namespace wpd::cli
