#include "wpd/interferometer.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <ostream>

#include <Eigen/Dense>

#include "wpd/errors.hpp"

namespace wpd {

namespace {

constexpr cplx I{0.0, 1.0};
constexpr double kPi = std::numbers::pi;

CMat4 from_blocks(const CMat2& b00, const CMat2& b01, const CMat2& b10, const CMat2& b11) {
  CMat4 out;
  const CMat2* blocks[2][2] = {{&b00, &b01}, {&b10, &b11}};
  for (std::size_t r = 0; r < 2; ++r)
    for (std::size_t c = 0; c < 2; ++c)
      for (std::size_t k = 0; k < 2; ++k)
        for (std::size_t l = 0; l < 2; ++l) out(2 * r + k, 2 * c + l) = (*blocks[r][c])(k, l);
  return out;
}

void check_port(int port) {
  if (port != 0 && port != 1) throw RangeError("port must be 0 or 1");
}

CMat2 hermitian_part(const CMat2& m) { return 0.5 * (m + adjoint(m)); }

}  // namespace

void InterferometerConfig::validate() const {
  if (!std::isfinite(phase_phi) || !std::isfinite(theta0_deg) || !std::isfinite(theta1_deg))
    throw RangeError("interferometer angles and phase must be finite");
  if (!(visibility_scale > 0.0 && visibility_scale <= 1.0))
    throw RangeError("visibility_scale must lie in (0, 1]");
}

void SpectralModel::validate() const {
  if (!(center_wavelength_nm > 0.0) || !std::isfinite(center_wavelength_nm))
    throw RangeError("center wavelength must be positive");
  if (!(bandwidth_nm >= 0.0)) throw RangeError("bandwidth must be >= 0");
  if (shape == SpectralShape::rectangular && !(bandwidth_nm > 0.0))
    throw RangeError("rectangular spectrum needs a positive bandwidth");
}

double SpectralModel::coherence_length_um() const {
  if (shape == SpectralShape::monochromatic) return std::numeric_limits<double>::infinity();
  const double lambda_um = center_wavelength_nm * 1e-3;
  const double dlambda_um = bandwidth_nm * 1e-3;
  return lambda_um * lambda_um / (2.0 * kPi * dlambda_um);
}

// ---- elements -----------------------------------------------------------

CMat2 jones_qwp(Angle theta) {
  const double t = 2.0 * theta.radians();
  CMat2 m = -I * sigma0() + std::sin(t) * sigma1() + std::cos(t) * sigma3();
  return (I / std::sqrt(2.0)) * m;
}

CMat2 jones_hwp(Angle theta) {
  const double t = 2.0 * theta.radians();
  return std::sin(t) * sigma1() + std::cos(t) * sigma3();
}

CMat2 jones_mirror() { return sigma3(); }

CMat4 npbs_unitary() {
  const double h = 1.0 / std::sqrt(2.0);
  const CMat2 s0 = h * sigma0();
  const CMat2 r = (h * I) * sigma3();
  return from_blocks(s0, r, r, s0);
}

CMat2 retro_rotator(Angle theta) { return jones_qwp(-theta) * jones_mirror() * jones_qwp(theta); }

CMat2 retro_rotator_flipped(Angle theta) { return sigma3() * retro_rotator(theta) * sigma3(); }

CMat4 path_unitary(const InterferometerConfig& cfg) {
  cfg.validate();
  CMat2 arm0 = std::exp(I * cfg.phase_phi) * retro_rotator(Angle::deg(cfg.theta0_deg));
  CMat2 arm1 = retro_rotator(Angle::deg(cfg.theta1_deg));
  if (cfg.block == Block::block0) arm0 = CMat2::zero();
  if (cfg.block == Block::block1) arm1 = CMat2::zero();
  return from_blocks(arm0, CMat2::zero(), CMat2::zero(), arm1);
}

CMat4 transfer_matrix(const InterferometerConfig& cfg) {
  const CMat4 bs = npbs_unitary();
  return adjoint(bs) * path_unitary(cfg) * bs;
}

CMat4 interferometer_unitary(const InterferometerConfig& cfg) {
  if (cfg.block != Block::none) throw BlockedPath("use conditional_output for a blocked interferometer");
  return transfer_matrix(cfg);
}

// ---- outputs ------------------------------------------------------------

CMat2 output_matrix(const InterferometerConfig& cfg, const PolDensity& rho_in, int port,
                    double coherence) {
  check_port(port);
  const auto p = static_cast<std::size_t>(port);
  const auto propagate = [&](const InterferometerConfig& c) {
    const CMat2 k = block(transfer_matrix(c), p, 0);
    return k * rho_in.matrix() * adjoint(k);
  };
  const CMat2 coherent = propagate(cfg);
  if (coherence == 1.0 || cfg.block != Block::none) return hermitian_part(coherent);

  InterferometerConfig only0 = cfg;
  only0.block = Block::block1;
  InterferometerConfig only1 = cfg;
  only1.block = Block::block0;
  const CMat2 incoherent = propagate(only0) + propagate(only1);
  return hermitian_part(coherence * coherent + (1.0 - coherence) * incoherent);
}

PortOutput output_density(const InterferometerConfig& cfg, const PolDensity& rho_in, int port) {
  const CMat2 m = output_matrix(cfg, rho_in, port, cfg.visibility_scale);
  const double prob = trace(m).real();
  if (prob < 1e-15) throw ZeroProbability("no photons reach the requested port");
  return {prob, PolDensity::from_matrix((1.0 / prob) * m)};
}

cplx interference_coefficient(const InterferometerConfig& cfg, const PolDensity& rho_in) {
  const CMat2 r0 = retro_rotator(Angle::deg(cfg.theta0_deg));
  const CMat2 r1t = retro_rotator_flipped(Angle::deg(cfg.theta1_deg));
  return trace(r0 * rho_in.matrix() * adjoint(r1t));
}

double port_intensity_from_coefficient(cplx c, double phi, int port, double visibility_scale) {
  check_port(port);
  const double sign = port == 0 ? 1.0 : -1.0;
  return 0.5 * (1.0 + sign * visibility_scale * std::abs(c) * std::cos(phi + std::arg(c)));
}

PortOutput conditional_output(const InterferometerConfig& cfg, const PolDensity& rho_in,
                              int open_path, int port) {
  if (open_path != 0 && open_path != 1) throw RangeError("open path must be 0 or 1");
  InterferometerConfig c = cfg;
  c.block = open_path == 0 ? Block::block1 : Block::block0;
  const CMat2 m = output_matrix(c, rho_in, port, 1.0);
  const double prob = trace(m).real();
  if (prob < 1e-15) throw ZeroProbability("no photons reach the requested port");
  return {prob, PolDensity::from_matrix((1.0 / prob) * m)};
}

// ---- analyzers ----------------------------------------------------------

CMat2 analyzer_projector(const AnalyzerSetting& a, Detector det) {
  if (!a.enabled) return det == Detector::transmit ? sigma0() : CMat2::zero();
  const CMat2 u = jones_qwp(Angle::deg(a.qwp_angle_deg)) * jones_hwp(Angle::deg(a.hwp_angle_deg));
  const CVec<2> pbs_arm = det == Detector::transmit ? CVec<2>{1.0, 0.0} : CVec<2>{0.0, 1.0};
  const CMat2 ud = adjoint(u);
  return hermitian_part(ud * outer(pbs_arm, pbs_arm) * u);
}

double analyzer_weight(const CMat2& unnormalized, const AnalyzerSetting& a, Detector det) {
  return std::max(0.0, trace(analyzer_projector(a, det) * unnormalized).real());
}

double analyzer_probability(const PolDensity& rho_port, const AnalyzerSetting& a, Detector det) {
  return std::min(1.0, analyzer_weight(rho_port.matrix(), a, det));
}

// ---- fringes ------------------------------------------------------------

double phase_from_delta(double delta_um, double center_wavelength_nm) {
  return 2.0 * kPi * (2.0 * delta_um) / (center_wavelength_nm * 1e-3);
}

double sinc(double x) {
  if (std::abs(x) < 1e-4) return 1.0 - x * x / 6.0 + x * x * x * x / 120.0;
  return std::sin(x) / x;
}

double envelope_factor(double delta_um, const SpectralModel& spectral) {
  if (spectral.shape == SpectralShape::monochromatic) return 1.0;
  return sinc(delta_um / spectral.coherence_length_um());
}

FringeTable fringe_scan(const InterferometerConfig& cfg, const PolDensity& rho_in,
                        const SpectralModel& spectral, std::span<const double> delta_grid_um,
                        const std::optional<AnalyzerSetting>& analyzer, Exec exec) {
  if (delta_grid_um.empty()) throw EmptyInput("fringe scan needs at least one delay");
  cfg.validate();
  spectral.validate();

  FringeTable table;
  table.has_analyzer = analyzer.has_value();
  table.rows = ordered_map(
      delta_grid_um.size(),
      [&](std::size_t i) {
        FringeRow row;
        row.delta_um = delta_grid_um[i];
        row.phi_rad = cfg.phase_phi + phase_from_delta(row.delta_um, spectral.center_wavelength_nm);
        InterferometerConfig at = cfg;
        at.phase_phi = row.phi_rad;
        const double coherence = cfg.visibility_scale * envelope_factor(row.delta_um, spectral);
        const CMat2 m0 = output_matrix(at, rho_in, 0, coherence);
        const CMat2 m1 = output_matrix(at, rho_in, 1, coherence);
        row.p_out0 = trace(m0).real();
        row.p_out1 = trace(m1).real();
        if (analyzer) {
          row.p_apd10 = analyzer_weight(m1, *analyzer, Detector::transmit);
          row.p_apd11 = analyzer_weight(m1, *analyzer, Detector::reflect);
        }
        return row;
      },
      exec);
  return table;
}

void write_fringe_csv(std::ostream& os, const FringeTable& table) {
  os << "delta_um,phi_rad,p_out0,p_out1";
  if (table.has_analyzer) os << ",p_apd10,p_apd11";
  os << '\n';
  char buf[256];
  for (const auto& r : table.rows) {
    std::snprintf(buf, sizeof buf, "%.9g,%.12g,%.12g,%.12g", r.delta_um, r.phi_rad, r.p_out0,
                  r.p_out1);
    os << buf;
    if (table.has_analyzer) {
      std::snprintf(buf, sizeof buf, ",%.12g,%.12g", r.p_apd10, r.p_apd11);
      os << buf;
    }
    os << '\n';
  }
}

// ---- fits ---------------------------------------------------------------

VisibilityFit fit_visibility(std::span<const double> phi, std::span<const double> intensity) {
  if (phi.size() != intensity.size()) throw RangeError("phase and intensity lengths differ");
  if (phi.size() < 8) throw EmptyInput("visibility fit needs at least 8 samples");
  cplx first = 0.0;
  double total = 0.0;
  for (std::size_t k = 0; k < phi.size(); ++k) {
    first += intensity[k] * std::exp(-I * phi[k]);
    total += intensity[k];
  }
  if (!(total > 0.0)) throw ZeroProbability("fringe has no intensity");
  return {2.0 * std::abs(first) / total, std::arg(first)};
}

double envelope_model(const FringeParams& p, double delta_um) {
  return p.amplitude * (1.0 + p.visibility * sinc((delta_um - p.delta0_um) / p.coherence_um));
}

namespace {

// d/du [sin(u)/u]
double dsinc(double u) {
  if (std::abs(u) < 1e-3) return -u / 3.0 + u * u * u / 30.0;
  return (u * std::cos(u) - std::sin(u)) / (u * u);
}

FringeParams initial_guess(std::span<const double> x, std::span<const double> y) {
  FringeParams p;
  std::size_t imax = 0;
  double mean = 0.0;
  for (std::size_t k = 0; k < y.size(); ++k) {
    mean += y[k];
    if (y[k] > y[imax]) imax = k;
  }
  mean /= static_cast<double>(y.size());
  p.amplitude = mean;
  p.delta0_um = x[imax];
  p.visibility = mean > 0.0 ? (y[imax] - mean) / mean : 1.0;
  // First crossing of the baseline beyond the peak sits near u = pi.
  double width = 0.0;
  for (std::size_t k = imax + 1; k < y.size(); ++k) {
    if (y[k] <= mean) {
      width = x[k] - x[imax];
      break;
    }
  }
  if (!(width > 0.0)) width = (x.back() - x.front()) / 4.0;
  p.coherence_um = width / std::numbers::pi;
  return p;
}

}  // namespace

FringeFit fit_fringe(std::span<const double> delta_um, std::span<const double> y,
                     std::span<const double> sigma) {
  const std::size_t n = delta_um.size();
  if (n != y.size() || (!sigma.empty() && sigma.size() != n))
    throw RangeError("fit inputs have mismatched lengths");
  if (n < 8) throw EmptyInput("envelope fit needs at least 8 samples");

  using Vec4 = Eigen::Vector4d;
  using Mat4 = Eigen::Matrix4d;
  const auto pack = [](const FringeParams& p) {
    return Vec4(p.amplitude, p.visibility, p.delta0_um, p.coherence_um);
  };
  const auto unpack = [](const Vec4& v) { return FringeParams{v[0], v[1], v[2], v[3]}; };
  const auto weight = [&](std::size_t k) {
    return sigma.empty() ? 1.0 : 1.0 / (sigma[k] * sigma[k]);
  };
  const auto chi2_of = [&](const Vec4& v) {
    const FringeParams p = unpack(v);
    double s = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      const double r = y[k] - envelope_model(p, delta_um[k]);
      s += weight(k) * r * r;
    }
    return s;
  };
  const auto normal_equations = [&](const Vec4& v, Mat4& jtj, Vec4& jtr) {
    jtj.setZero();
    jtr.setZero();
    const double a = v[0], vis = v[1], d0 = v[2], lc = v[3];
    for (std::size_t k = 0; k < n; ++k) {
      const double u = (delta_um[k] - d0) / lc;
      const double s = sinc(u);
      const double ds = dsinc(u);
      const Vec4 j(1.0 + vis * s, a * s, -a * vis * ds / lc, -a * vis * ds * u / lc);
      const double r = y[k] - a * (1.0 + vis * s);
      jtj += weight(k) * j * j.transpose();
      jtr += weight(k) * r * j;
    }
  };

  Vec4 x = pack(initial_guess(delta_um, y));
  double chi2 = chi2_of(x);
  double lambda = 1e-3;
  Mat4 jtj;
  Vec4 jtr;
  bool converged = false;
  int it = 0;
  for (; it < 200 && !converged; ++it) {
    normal_equations(x, jtj, jtr);
    Mat4 damped = jtj;
    damped.diagonal() += lambda * jtj.diagonal();
    const Vec4 step = damped.ldlt().solve(jtr);
    const Vec4 trial = x + step;
    const double trial_chi2 = trial[3] > 0.0 ? chi2_of(trial) : std::numeric_limits<double>::infinity();
    if (trial_chi2 <= chi2) {
      const bool small = (step.array().abs() <= 1e-11 * (x.array().abs() + 1e-9)).all();
      x = trial;
      const bool flat = chi2 - trial_chi2 <= 1e-15 * (chi2 + 1e-300);
      chi2 = trial_chi2;
      lambda = std::max(lambda / 10.0, 1e-12);
      converged = small || (flat && lambda <= 1e-6);
    } else {
      lambda *= 10.0;
      if (lambda > 1e12) converged = (chi2 <= 1e-24 * static_cast<double>(n));
    }
  }
  if (!converged) throw NonConvergence("envelope fit did not converge in 200 iterations");

  normal_equations(x, jtj, jtr);
  Mat4 cov = jtj.inverse();
  if (sigma.empty() && n > 4) cov *= chi2 / static_cast<double>(n - 4);

  FringeFit fit;
  fit.params = unpack(x);
  fit.std_error = unpack(cov.diagonal().cwiseMax(0.0).cwiseSqrt());
  fit.iterations = it;
  fit.chi2 = chi2;
  return fit;
}

}  // namespace wpd
