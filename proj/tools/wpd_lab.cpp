// wpd_lab: scenario runner for the polarization which-way interferometer.
//
// Exit codes: 0 success, 2 configuration error, 3 domain error (invalid
// state, range, ...), 4 failed gate or internal consistency check.
// Errors are printed to stderr as "error[Category]: message".

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "wpd/cli/config.hpp"
#include "wpd/cli/scenarios.hpp"
#include "wpd/errors.hpp"
#include "wpd/parallel.hpp"

namespace fs = std::filesystem;
using namespace wpd;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitDomain = 3;
constexpr int kExitGate = 4;

int report_error(const std::string& category, const std::string& msg, int code) {
  std::cerr << "error[" << category << "]: " << msg << '\n';
  return code;
}

// Flag name -> config key, in the order flags are applied.
const std::vector<std::pair<std::string, std::string>> kRunFlags = {
    {"theta0", "theta0"},
    {"theta1", "theta1"},
    {"stokes", "stokes"},
    {"photons", "photons"},
    {"seed", "seed"},
    {"out", "out"},
    {"visibility-scale", "visibility_scale"},
    {"phi", "phi"},
    {"center-wavelength", "center_wavelength_nm"},
    {"bandwidth", "bandwidth_nm"},
    {"delta", "delta"},
    {"analyzer", "analyzer"},
    {"phase-points", "phase_points"},
    {"resamples", "resamples"},
};

struct RunCommand {
  cli::Mode mode;
  CLI::App* app = nullptr;
  std::map<std::string, std::string> values;
  std::string config_path;
  bool serial = false;
};

void add_run_options(RunCommand& cmd) {
  static const std::map<std::string, std::string> help = {
      {"theta0", "path-0 rotator QWP angle [deg]"},
      {"theta1", "path-1 rotator QWP angle [deg]: x, start:stop:step or a,b,c"},
      {"stokes", "input Stokes vector s1,s2,s3 (sweep: several separated by ';')"},
      {"photons", "photons per setting (per branch, per phase point or per basis)"},
      {"seed", "master seed"},
      {"out", "output CSV path (default: stdout)"},
      {"visibility-scale", "multiplier on the interference term, in (0, 1]"},
      {"phi", "extra phase on path 0 [rad]"},
      {"center-wavelength", "source centre wavelength [nm]"},
      {"bandwidth", "source bandwidth [nm]; 0 means monochromatic"},
      {"delta", "arm displacement grid [um]"},
      {"analyzer", "OUT1 analyzer: none, circular or hwp_deg,qwp_deg"},
      {"phase-points", "phase samples per fringe"},
      {"resamples", "bootstrap resamples (0 disables intervals)"},
  };
  for (const auto& [flag, key] : kRunFlags)
    cmd.app->add_option("--" + flag, cmd.values[flag], help.at(flag));
  cmd.app->add_option("--config", cmd.config_path, "key = value configuration file");
  cmd.app->add_flag("--serial", cmd.serial, "run every kernel on the serial reference path");
}

int execute(const RunCommand& cmd) {
  cli::RunConfig cfg;
  if (!cmd.config_path.empty()) cli::apply_config_file(cfg, cmd.config_path);
  cfg.mode = cmd.mode;
  for (const auto& [flag, key] : kRunFlags)
    if (cmd.app->count("--" + flag) > 0) cli::set_field(cfg, key, cmd.values.at(flag), "--" + flag);

  const Exec exec = cmd.serial ? Exec::serial : Exec::parallel;
  const cli::Report rep = cli::run(cfg, exec);

  std::ostream* summary = &std::cerr;
  if (cfg.out.empty()) {
    std::cout << rep.csv;
  } else {
    std::ofstream out(cfg.out, std::ios::binary);
    if (!out) throw ConfigError("field 'out': cannot write '" + cfg.out + "'");
    out << rep.csv;
    summary = &std::cout;
  }
  for (const auto& line : rep.summary) *summary << line << '\n';
  if (!rep.gates_ok()) {
    for (const auto& f : rep.gate_failures) report_error("GateFailure", f, kExitGate);
    return kExitGate;
  }
  return 0;
}

int execute_plot(const std::string& kind, const std::string& csv, const std::string& out) {
  const cli::PlotKind k = cli::parse_plot_kind(kind);
  if (out.empty()) {
    std::cout << cli::emit_plot_script(k, csv);
    return 0;
  }
  const fs::path script_dir = fs::absolute(fs::path(out)).parent_path();
  const std::string rel = fs::absolute(csv).lexically_relative(script_dir).generic_string();
  std::ofstream os(out, std::ios::binary);
  if (!os) throw ConfigError("field 'out': cannot write '" + out + "'");
  os << cli::emit_plot_script(k, rel);
  std::cout << "plot script written to " << out << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  configure_threads_from_env();

  CLI::App app{"Wave-particle duality lab: sweeps, fringes, erasure and Monte Carlo runs"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string("wpd_lab ") + cli::kVersion);

  const std::vector<std::pair<cli::Mode, std::string>> commands = {
      {cli::Mode::sweep, "V, D_c and D over a theta1 grid"},
      {cli::Mode::fringe, "fringe table over an arm-displacement grid"},
      {cli::Mode::erasure, "quantum-erasure fringes and fitted visibilities"},
      {cli::Mode::wpd_verify, "Monte Carlo V and D with the V^2 + D^2 = 1 gate"},
      {cli::Mode::montecarlo, "Monte Carlo counts and likelihood estimates"},
      {cli::Mode::tomography, "three-basis state tomography"},
  };
  std::vector<RunCommand> runs;
  runs.reserve(commands.size());
  for (const auto& [mode, description] : commands) {
    RunCommand cmd{mode, nullptr, {}, {}, false};
    cmd.app = app.add_subcommand(std::string(cli::mode_name(mode)), description);
    runs.push_back(std::move(cmd));
    add_run_options(runs.back());
  }

  std::string plot_kind = "sweep", plot_csv, plot_out;
  CLI::App* plot = app.add_subcommand("plot", "emit a matplotlib script for a CSV table");
  plot->add_option("--kind", plot_kind, "sweep, erasure, montecarlo or wpd-verify");
  plot->add_option("--csv", plot_csv, "CSV produced by wpd_lab")->required();
  plot->add_option("--out", plot_out, "script path (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return report_error("ConfigError", e.what(), kExitConfig);
  }

  try {
    if (plot->parsed()) return execute_plot(plot_kind, plot_csv, plot_out);
    for (const auto& cmd : runs)
      if (cmd.app->parsed()) return execute(cmd);
  } catch (const ConfigError& e) {
    return report_error(e.category(), e.what(), kExitConfig);
  } catch (const InternalCheckFailure& e) {
    return report_error(e.category(), e.what(), kExitGate);
  } catch (const Error& e) {
    return report_error(e.category(), e.what(), kExitDomain);
  } catch (const std::exception& e) {
    return report_error("InternalError", e.what(), kExitGate);
  }
  return report_error("ConfigError", "no command given", kExitConfig);
}
