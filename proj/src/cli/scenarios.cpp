#include "wpd/cli/scenarios.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

#include "wpd/duality.hpp"
#include "wpd/errors.hpp"
#include "wpd/montecarlo.hpp"
#include "wpd/rng.hpp"

namespace wpd::cli {

namespace {

std::string fmt(double x) {
  if (x == 0.0) x = 0.0;  // no "-0"
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

std::string join(std::initializer_list<std::string> cells) {
  std::string out;
  for (const auto& c : cells) {
    if (!out.empty()) out += ',';
    out += c;
  }
  return out;
}

BootstrapOptions bootstrap_options(const RunConfig& cfg, Exec exec) {
  BootstrapOptions o;
  o.resamples = cfg.resamples;
  o.exec = exec;
  return o;
}

double wrap_pi(double a) {
  a = std::remainder(a, 2.0 * std::numbers::pi);
  return a <= -std::numbers::pi ? a + 2.0 * std::numbers::pi : a;
}

std::string counts_cells(const CountRecord& c) {
  return join({std::to_string(c.n[0][0]), std::to_string(c.n[0][1]), std::to_string(c.n[1][0]),
               std::to_string(c.n[1][1])});
}

}  // namespace

std::string provenance_header(const RunConfig& cfg) {
  std::ostringstream os;
  os << "# wpd_lab " << kVersion << '\n'
     << "# command: " << mode_name(cfg.mode) << '\n'
     << "# seed: " << cfg.seed << '\n'
     << "# rng: " << kRngAlgo << '\n'
     << "# config_hash: " << config_hash(cfg) << '\n';
  return os.str();
}

Report run_sweep(const RunConfig& cfg, Exec exec) {
  cfg.validate();
  const auto thetas = cfg.theta1_grid();
  const auto states = cfg.stokes_list();
  const std::size_t n = thetas.size() * states.size();

  const auto rows = ordered_map(
      n,
      [&](std::size_t i) {
        const StokesVector& s = states[i / thetas.size()];
        const double t1 = thetas[i % thetas.size()];
        const DualityReport r = duality_report(cfg.interferometer(t1), s);
        return join({fmt(cfg.theta0_deg), fmt(t1), fmt(s.s1), fmt(s.s2), fmt(s.s3),
                     std::string(1, case_letter(classify_case(s))), fmt(r.V), fmt(r.D_c),
                     fmt(r.D), fmt(r.sum_VD), fmt(r.sum_VDc)});
      },
      exec);

  Report rep;
  rep.csv = provenance_header(cfg) +
            "theta0_deg,theta1_deg,s1,s2,s3,case,V,Dc,D,V2_plus_D2,V2_plus_Dc2\n";
  for (const auto& r : rows) rep.csv += r + '\n';
  rep.summary.push_back("sweep: " + std::to_string(n) + " rows (" +
                        std::to_string(states.size()) + " states x " +
                        std::to_string(thetas.size()) + " angles)");
  return rep;
}

Report run_fringe(const RunConfig& cfg, Exec exec) {
  cfg.validate();
  const auto deltas = cfg.delta_grid();
  const double t1 = cfg.theta1_grid().front();
  const PolDensity rho = density_from_stokes(cfg.stokes_list().front());
  const FringeTable table =
      fringe_scan(cfg.interferometer(t1), rho, cfg.spectral(), deltas, cfg.analyzer_setting(), exec);
  std::ostringstream os;
  write_fringe_csv(os, table);

  Report rep;
  rep.csv = provenance_header(cfg) + os.str();
  const double lc = cfg.spectral().coherence_length_um();
  rep.summary.push_back("fringe: " + std::to_string(table.rows.size()) + " rows at theta1=" +
                        fmt(t1) + " deg, l_c=" + (std::isfinite(lc) ? fmt(lc) + " um" : "inf"));
  return rep;
}

std::vector<ErasureFit> erasure_fits(const RunConfig& cfg) {
  cfg.validate();
  const auto phi = uniform_phase_grid(cfg.phase_points);
  const PolDensity rho = density_from_stokes(cfg.stokes_list().front());
  const AnalyzerSetting circ = AnalyzerSetting::circular();
  std::vector<ErasureFit> fits;
  for (double t1 : cfg.theta1_grid()) {
    std::vector<double> out1(phi.size()), apd10(phi.size()), apd11(phi.size());
    for (std::size_t k = 0; k < phi.size(); ++k) {
      InterferometerConfig c = cfg.interferometer(t1);
      c.phase_phi = phi[k];
      const CMat2 m = output_matrix(c, rho, 1, c.visibility_scale);
      out1[k] = trace(m).real();
      apd10[k] = analyzer_weight(m, circ, Detector::transmit);
      apd11[k] = analyzer_weight(m, circ, Detector::reflect);
    }
    const auto fit = [&](const char* name, const std::vector<double>& y) {
      const VisibilityFit f = fit_visibility(phi, y);
      fits.push_back({t1, name, f.visibility, f.phase});
    };
    fit("out1", out1);
    fit("apd10", apd10);
    fit("apd11", apd11);
  }
  return fits;
}

Report run_erasure(const RunConfig& cfg) {
  cfg.validate();
  const auto phi = uniform_phase_grid(cfg.phase_points);
  const PolDensity rho = density_from_stokes(cfg.stokes_list().front());
  const AnalyzerSetting circ = AnalyzerSetting::circular();

  Report rep;
  rep.csv = provenance_header(cfg) + "theta1_deg,phi_rad,p_out0,p_out1,p_apd10,p_apd11\n";
  for (double t1 : cfg.theta1_grid()) {
    for (double p : phi) {
      InterferometerConfig c = cfg.interferometer(t1);
      c.phase_phi = p;
      const CMat2 m0 = output_matrix(c, rho, 0, c.visibility_scale);
      const CMat2 m1 = output_matrix(c, rho, 1, c.visibility_scale);
      rep.csv += join({fmt(t1), fmt(p), fmt(trace(m0).real()), fmt(trace(m1).real()),
                       fmt(analyzer_weight(m1, circ, Detector::transmit)),
                       fmt(analyzer_weight(m1, circ, Detector::reflect))}) +
                 '\n';
    }
  }
  const auto fits = erasure_fits(cfg);
  for (std::size_t i = 0; i + 2 < fits.size(); i += 3) {
    for (std::size_t j = i; j < i + 3; ++j) {
      const std::string line = "fit theta1_deg=" + fmt(fits[j].theta1_deg) +
                               " channel=" + fits[j].channel + " V=" + fmt(fits[j].visibility) +
                               " phase=" + fmt(fits[j].phase);
      rep.csv += "# " + line + '\n';
      rep.summary.push_back(line);
    }
    const std::string rel = "relative_phase theta1_deg=" + fmt(fits[i].theta1_deg) +
                            " apd10_minus_apd11=" +
                            fmt(wrap_pi(fits[i + 1].phase - fits[i + 2].phase));
    rep.csv += "# " + rel + '\n';
    rep.summary.push_back(rel);
  }
  return rep;
}

Report run_wpd_verify(const RunConfig& cfg, Exec exec) {
  cfg.validate();
  const auto thetas = cfg.theta1_grid();
  const StokesVector s = cfg.stokes_list().front();
  const PolDensity rho = density_from_stokes(s);
  const auto phi = uniform_phase_grid(cfg.phase_points);
  const BootstrapOptions opts = bootstrap_options(cfg, exec);

  Report rep;
  rep.csv = provenance_header(cfg) +
            "setting_id,theta1_deg,V_hat,V_ci_low,V_ci_high,D_hat,D_ci_low,D_ci_high,"
            "V2_plus_D2,sigma,V_true,D_true,Dc_true,seed,rng_algo\n";
  for (std::size_t i = 0; i < thetas.size(); ++i) {
    const InterferometerConfig ic = cfg.interferometer(thetas[i]);
    RngStream rng(cfg.seed, i);
    const VisibilityMC v = estimate_visibility_mc(ic, rho, phi, cfg.photons, rng, opts);
    const DecomposedD d = estimate_D_decomposed(ic, s, cfg.photons, rng, opts);
    const Closure closure = wpd_closure(v.v, d.d);
    const DualityReport truth = duality_report(ic, s);
    rep.csv += join({std::to_string(i), fmt(thetas[i]), fmt(v.v.value), fmt(v.v.ci_low),
                     fmt(v.v.ci_high), fmt(d.d.value), fmt(d.d.ci_low), fmt(d.d.ci_high),
                     fmt(closure.value), fmt(closure.sigma), fmt(truth.V), fmt(truth.D),
                     fmt(truth.D_c), std::to_string(cfg.seed), std::string(kRngAlgo)}) +
               '\n';
    const double dev = std::abs(closure.value - 1.0);
    const bool ok = dev <= 3.0 * closure.sigma;
    rep.summary.push_back("theta1=" + fmt(thetas[i]) + " V=" + fmt(v.v.value) + " D=" +
                          fmt(d.d.value) + " V2+D2=" + fmt(closure.value) + " +- " +
                          fmt(closure.sigma) + (ok ? "" : "  [outside 3 sigma]"));
    if (!ok)
      rep.gate_failures.push_back("V^2+D^2 at theta1=" + fmt(thetas[i]) + " deviates by " +
                                  fmt(dev / std::max(closure.sigma, 1e-300)) + " sigma");
  }
  return rep;
}

Report run_montecarlo(const RunConfig& cfg, Exec exec) {
  cfg.validate();
  const auto thetas = cfg.theta1_grid();
  const StokesVector s = cfg.stokes_list().front();
  const BootstrapOptions opts = bootstrap_options(cfg, exec);
  const std::string seed = std::to_string(cfg.seed);
  const std::string algo(kRngAlgo);

  Report rep;
  rep.csv = provenance_header(cfg) +
            "setting_id,theta1_deg,branch,N00,N01,N10,N11,estimate,ci_low,ci_high,seed,rng_algo\n";
  for (std::size_t i = 0; i < thetas.size(); ++i) {
    RngStream rng(cfg.seed, i);
    const DecomposedD d = estimate_D_decomposed(cfg.interferometer(thetas[i]), s, cfg.photons, rng, opts);
    const auto row = [&](const char* branch, const CountRecord& c, const EstimateWithCI& e) {
      rep.csv += join({std::to_string(i), fmt(thetas[i]), branch, counts_cells(c), fmt(e.value),
                       fmt(e.ci_low), fmt(e.ci_high), seed, algo}) +
                 '\n';
    };
    row("H", d.counts[0], d.likelihood[0]);
    row("V", d.counts[1], d.likelihood[1]);
    CountRecord both;
    for (int p = 0; p < 2; ++p)
      for (int q = 0; q < 2; ++q) both.n[p][q] = d.counts[0].n[p][q] + d.counts[1].n[p][q];
    row("D", both, d.d);
    rep.summary.push_back("theta1=" + fmt(thetas[i]) + " D=" + fmt(d.d.value) + " [" +
                          fmt(d.d.ci_low) + ", " + fmt(d.d.ci_high) + "]");
  }
  return rep;
}

Report run_tomography(const RunConfig& cfg, Exec exec) {
  cfg.validate();
  const StokesVector s = cfg.stokes_list().front();
  const PolDensity rho = density_from_stokes(s);
  RngStream rng(cfg.seed, 0);
  const Tomography t = tomography(rho, cfg.photons, rng, bootstrap_options(cfg, exec));
  const std::string seed = std::to_string(cfg.seed);
  const std::string algo(kRngAlgo);

  Report rep;
  rep.csv = provenance_header(cfg) +
            "quantity,N_plus,N_minus,estimate,ci_low,ci_high,truth,seed,rng_algo\n";
  const std::array<double, 3> truth{s.s1, s.s2, s.s3};
  for (std::size_t k = 0; k < 3; ++k)
    rep.csv += join({"s" + std::to_string(k + 1), std::to_string(t.counts[k][0]),
                     std::to_string(t.counts[k][1]), fmt(t.s[k].value), fmt(t.s[k].ci_low),
                     fmt(t.s[k].ci_high), fmt(truth[k]), seed, algo}) +
               '\n';
  const auto& f = t.fidelity_unpolarized;
  rep.csv += join({"fidelity_unpolarized", "", "", fmt(f.value), fmt(f.ci_low), fmt(f.ci_high),
                   fmt(fidelity(rho, unpolarized())), seed, algo}) +
             '\n';
  rep.csv += join({"degree_of_polarization", "", "", fmt(t.degree_of_polarization), "", "",
                   fmt(s.norm()), seed, algo}) +
             '\n';
  rep.summary.push_back("tomography: s=(" + fmt(t.estimate.s1) + ", " + fmt(t.estimate.s2) +
                        ", " + fmt(t.estimate.s3) + ") DoP=" + fmt(t.degree_of_polarization) +
                        " F=" + fmt(f.value));
  return rep;
}

Report run(const RunConfig& cfg, Exec exec) {
  switch (cfg.mode) {
    case Mode::sweep: return run_sweep(cfg, exec);
    case Mode::fringe: return run_fringe(cfg, exec);
    case Mode::erasure: return run_erasure(cfg);
    case Mode::wpd_verify: return run_wpd_verify(cfg, exec);
    case Mode::montecarlo: return run_montecarlo(cfg, exec);
    case Mode::tomography: return run_tomography(cfg, exec);
  }
  throw ConfigError("unknown mode");
}

}  // namespace wpd::cli
