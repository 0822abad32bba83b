#include "wpd/cli/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "wpd/errors.hpp"

namespace wpd::cli {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r'))
    s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

[[noreturn]] void fail(std::string_view where, std::string_view field, const std::string& msg) {
  std::string text;
  if (!where.empty()) text += std::string(where) + ": ";
  text += "field '" + std::string(field) + "': " + msg;
  throw ConfigError(text);
}

double to_double(std::string_view text, std::string_view field, std::string_view where = {}) {
  text = trim(text);
  double v = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || res.ec != std::errc{} || res.ptr != text.data() + text.size() ||
      !std::isfinite(v))
    fail(where, field, "expected a number, got '" + std::string(text) + "'");
  return v;
}

std::uint64_t to_count(std::string_view text, std::string_view field, std::string_view where) {
  text = trim(text);
  std::uint64_t v = 0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || res.ec != std::errc{} || res.ptr != text.data() + text.size())
    fail(where, field, "expected a non-negative integer, got '" + std::string(text) + "'");
  return v;
}

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  std::size_t pos = 0;
  while (true) {
    const auto next = text.find(sep, pos);
    parts.push_back(text.substr(pos, next == std::string_view::npos ? next : next - pos));
    if (next == std::string_view::npos) break;
    pos = next + 1;
  }
  return parts;
}

std::string num(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

std::string_view mode_name(Mode m) {
  switch (m) {
    case Mode::sweep: return "sweep";
    case Mode::fringe: return "fringe";
    case Mode::erasure: return "erasure";
    case Mode::wpd_verify: return "wpd-verify";
    case Mode::montecarlo: return "montecarlo";
    case Mode::tomography: return "tomography";
  }
  return "sweep";
}

Mode parse_mode(std::string_view name) {
  for (Mode m : {Mode::sweep, Mode::fringe, Mode::erasure, Mode::wpd_verify, Mode::montecarlo,
                 Mode::tomography})
    if (mode_name(m) == trim(name)) return m;
  throw ConfigError("field 'mode': unknown mode '" + std::string(name) + "'");
}

std::vector<double> parse_grid(std::string_view text, std::string_view field) {
  text = trim(text);
  if (text.empty()) fail({}, field, "empty grid");
  if (text.find(':') != std::string_view::npos) {
    const auto parts = split(text, ':');
    if (parts.size() != 3) fail({}, field, "range must be start:stop:step");
    const double start = to_double(parts[0], field);
    const double stop = to_double(parts[1], field);
    const double step = to_double(parts[2], field);
    if (step <= 0.0) fail({}, field, "step must be positive");
    if (stop < start) fail({}, field, "stop must not precede start");
    const auto n = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
    if (n > 10'000'000) fail({}, field, "range has too many points");
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = start + static_cast<double>(i) * step;
    return out;
  }
  std::vector<double> out;
  for (auto part : split(text, ',')) out.push_back(to_double(part, field));
  return out;
}

std::vector<StokesVector> parse_stokes_list(std::string_view text, std::string_view field) {
  std::vector<StokesVector> out;
  for (auto part : split(text, ';')) {
    part = trim(part);
    if (part.empty()) continue;
    try {
      out.push_back(parse_stokes(part));
    } catch (const ConfigError& e) {
      fail({}, field, e.what());
    }
  }
  if (out.empty()) fail({}, field, "no Stokes vector given");
  return out;
}

std::string RunConfig::theta1_text() const {
  if (theta1) return *theta1;
  switch (mode) {
    case Mode::sweep: return "0:45:1";
    case Mode::erasure: return "0,45";
    case Mode::wpd_verify:
    case Mode::montecarlo: return "0,15,22.5,30,45";
    default: return "0";
  }
}

std::vector<double> RunConfig::theta1_grid() const { return parse_grid(theta1_text(), "theta1"); }

std::vector<StokesVector> RunConfig::stokes_list() const {
  return parse_stokes_list(stokes, "stokes");
}

std::vector<double> RunConfig::delta_grid() const { return parse_grid(delta, "delta"); }

std::optional<AnalyzerSetting> RunConfig::analyzer_setting() const {
  const auto a = trim(analyzer);
  if (a == "none") return std::nullopt;
  if (a == "circular") return AnalyzerSetting::circular();
  const auto parts = split(a, ',');
  if (parts.size() != 2) fail({}, "analyzer", "expected none, circular or 'hwp_deg,qwp_deg'");
  return AnalyzerSetting{to_double(parts[0], "analyzer"), to_double(parts[1], "analyzer"), true};
}

SpectralModel RunConfig::spectral() const {
  SpectralModel s;
  s.center_wavelength_nm = center_wavelength_nm;
  s.bandwidth_nm = bandwidth_nm;
  s.shape = bandwidth_nm > 0.0 ? SpectralShape::rectangular : SpectralShape::monochromatic;
  return s;
}

InterferometerConfig RunConfig::interferometer(double theta1_deg) const {
  InterferometerConfig c;
  c.theta0_deg = theta0_deg;
  c.theta1_deg = theta1_deg;
  c.phase_phi = phase_phi;
  c.visibility_scale = visibility_scale;
  return c;
}

void RunConfig::validate() const {
  (void)theta1_grid();
  (void)stokes_list();
  (void)analyzer_setting();
  if (mode == Mode::fringe) (void)delta_grid();
  if (!(visibility_scale > 0.0 && visibility_scale <= 1.0))
    fail({}, "visibility_scale", "must lie in (0, 1]");
  if (center_wavelength_nm <= 0.0) fail({}, "center_wavelength_nm", "must be positive");
  if (bandwidth_nm < 0.0) fail({}, "bandwidth_nm", "must not be negative");
  if (photons < 1) fail({}, "photons", "must be at least 1");
  if (phase_points < 8) fail({}, "phase_points", "must be at least 8");
}

void set_field(RunConfig& cfg, std::string_view key, std::string_view value,
               std::string_view where) {
  key = trim(key);
  value = trim(value);
  const auto checked = [&](auto&& parse) {
    try {
      parse();
    } catch (const ConfigError& e) {
      throw ConfigError(std::string(where) + ": " + e.what());
    }
  };
  if (key == "mode") {
    checked([&] { cfg.mode = parse_mode(value); });
  } else if (key == "theta0") {
    cfg.theta0_deg = to_double(value, key, where);
  } else if (key == "theta1") {
    checked([&] { (void)parse_grid(value, key); });
    cfg.theta1 = std::string(value);
  } else if (key == "stokes") {
    checked([&] { (void)parse_stokes_list(value, key); });
    cfg.stokes = std::string(value);
  } else if (key == "visibility_scale") {
    cfg.visibility_scale = to_double(value, key, where);
  } else if (key == "phi") {
    cfg.phase_phi = to_double(value, key, where);
  } else if (key == "center_wavelength_nm") {
    cfg.center_wavelength_nm = to_double(value, key, where);
  } else if (key == "bandwidth_nm") {
    cfg.bandwidth_nm = to_double(value, key, where);
  } else if (key == "delta") {
    checked([&] { (void)parse_grid(value, key); });
    cfg.delta = std::string(value);
  } else if (key == "analyzer") {
    RunConfig probe;
    probe.analyzer = std::string(value);
    checked([&] { (void)probe.analyzer_setting(); });
    cfg.analyzer = probe.analyzer;
  } else if (key == "phase_points") {
    cfg.phase_points = to_count(value, key, where);
  } else if (key == "photons") {
    cfg.photons = to_count(value, key, where);
  } else if (key == "seed") {
    cfg.seed = to_count(value, key, where);
  } else if (key == "resamples") {
    cfg.resamples = to_count(value, key, where);
  } else if (key == "out") {
    cfg.out = std::string(value);
  } else {
    throw ConfigError(std::string(where) + ": unknown key '" + std::string(key) + "'");
  }
}

void apply_config_text(RunConfig& cfg, std::string_view text, std::string_view source) {
  std::size_t line_no = 0;
  for (auto line : split(text, '\n')) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::string where = std::string(source) + ":" + std::to_string(line_no);
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError(where + ": expected key = value");
    set_field(cfg, line.substr(0, eq), line.substr(eq + 1), where);
  }
}

void apply_config_file(RunConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  apply_config_text(cfg, buf.str(), path);
}

std::string canonical(const RunConfig& cfg) {
  std::ostringstream os;
  os << "mode=" << mode_name(cfg.mode) << '\n'
     << "theta0=" << num(cfg.theta0_deg) << '\n'
     << "theta1=" << cfg.theta1_text() << '\n'
     << "stokes=" << cfg.stokes << '\n'
     << "visibility_scale=" << num(cfg.visibility_scale) << '\n'
     << "phi=" << num(cfg.phase_phi) << '\n'
     << "center_wavelength_nm=" << num(cfg.center_wavelength_nm) << '\n'
     << "bandwidth_nm=" << num(cfg.bandwidth_nm) << '\n'
     << "delta=" << cfg.delta << '\n'
     << "analyzer=" << cfg.analyzer << '\n'
     << "phase_points=" << cfg.phase_points << '\n'
     << "photons=" << cfg.photons << '\n'
     << "seed=" << cfg.seed << '\n'
     << "resamples=" << cfg.resamples << '\n';
  return os.str();
}

std::string config_hash(const RunConfig& cfg) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : canonical(cfg)) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace wpd::cli
