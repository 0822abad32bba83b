#include "wpd/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include <boost/random/binomial_distribution.hpp>

#include "wpd/errors.hpp"

namespace wpd {

namespace {

std::uint64_t draw_binomial(std::uint64_t n, double p, RngStream& rng) {
  if (n == 0 || p <= 0.0) return 0;
  if (p >= 1.0) return n;
  boost::random::binomial_distribution<std::int64_t, double> dist(static_cast<std::int64_t>(n), p);
  return static_cast<std::uint64_t>(dist(rng.engine()));
}

double percentile(const std::vector<double>& sorted, double q) {
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

EstimateWithCI with_interval(double value, std::vector<double> replicates, double level) {
  EstimateWithCI e;
  e.value = value;
  e.level = level;
  e.ci_low = value;
  e.ci_high = value;
  if (!replicates.empty()) {
    std::vector<double> sorted = replicates;
    std::sort(sorted.begin(), sorted.end());
    e.ci_low = std::min(value, percentile(sorted, 0.5 * (1.0 - level)));
    e.ci_high = std::max(value, percentile(sorted, 0.5 * (1.0 + level)));
  }
  e.replicates = std::move(replicates);
  return e;
}

// Replicate b of a bootstrap draws from its own stream so the parallel and
// serial runs agree bit for bit.
template <class F>
auto bootstrap(RngStream& rng, const BootstrapOptions& opts, F&& one) {
  using R = decltype(one(rng));
  if (opts.resamples == 0) return std::vector<R>{};
  const std::uint64_t base = rng.engine()();
  return ordered_map(
      opts.resamples,
      [&](std::size_t b) {
        RngStream r(base, b);
        return one(r);
      },
      opts.exec);
}

double mean(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double stddev(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double m = mean(v);
  double acc = 0.0;
  for (double x : v) acc += (x - m) * (x - m);
  return std::sqrt(acc / static_cast<double>(v.size() - 1));
}

}  // namespace

double EstimateWithCI::sigma() const { return stddev(replicates); }

std::vector<std::uint64_t> sample_multinomial(std::span<const double> probs, std::uint64_t n,
                                              RngStream& rng) {
  double mass = 0.0;
  for (double p : probs) {
    if (!(p >= 0.0) || !std::isfinite(p)) throw RangeError("probabilities must be finite and >= 0");
    mass += p;
  }
  if (probs.empty() || mass <= 0.0) throw RangeError("probabilities sum to zero");
  std::vector<std::uint64_t> out(probs.size(), 0);
  std::uint64_t left = n;
  for (std::size_t i = 0; i + 1 < probs.size() && left > 0; ++i) {
    const double q = mass > 0.0 ? std::clamp(probs[i] / mass, 0.0, 1.0) : 0.0;
    out[i] = draw_binomial(left, q, rng);
    left -= out[i];
    mass -= probs[i];
  }
  out.back() += left;
  return out;
}

CountRecord sample_counts(const InterferometerConfig& cfg, const PolDensity& rho_in,
                          const AnalyzerSetting& analyzer, std::uint64_t photons, RngStream& rng) {
  if (photons < 1) throw RangeError("need at least one photon per setting");
  CountRecord c;
  for (int p = 0; p < 2; ++p) {
    const PortOutput out = conditional_output(cfg, rho_in, p, 1);
    const std::array<double, 2> probs{analyzer_probability(out.state, analyzer, Detector::transmit),
                                      analyzer_probability(out.state, analyzer, Detector::reflect)};
    const auto n = sample_multinomial(probs, photons, rng);
    c.n[p] = {n[0], n[1]};
  }
  return c;
}

double likelihood_from_counts(const CountRecord& c) {
  const std::uint64_t total = c.total();
  if (total == 0) throw EmptyCounts("no counts recorded");
  return static_cast<double>(std::max(c.n[0][0], c.n[1][0]) + std::max(c.n[0][1], c.n[1][1])) /
         static_cast<double>(total);
}

EstimateWithCI estimate_likelihood(const CountRecord& counts, RngStream& rng,
                                   const BootstrapOptions& opts) {
  const double value = likelihood_from_counts(counts);
  auto reps = bootstrap(rng, opts, [&](RngStream& r) {
    CountRecord c;
    for (int p = 0; p < 2; ++p) {
      const std::uint64_t n = counts.path_total(p);
      const double q = n > 0 ? static_cast<double>(counts.n[p][0]) / static_cast<double>(n) : 0.0;
      c.n[p][0] = draw_binomial(n, q, r);
      c.n[p][1] = n - c.n[p][0];
    }
    return likelihood_from_counts(c);
  });
  return with_interval(value, std::move(reps), opts.level);
}

AnalyzerSetting optimal_branch_analyzer(double theta1_deg, int branch) {
  const double offset = branch == 0 ? 22.5 : 67.5;
  return {-0.5 * theta1_deg + offset, 0.0, true};
}

DecomposedD estimate_D_decomposed(const InterferometerConfig& cfg, const StokesVector& source,
                                  std::uint64_t photons_per_branch, RngStream& rng,
                                  const BootstrapOptions& opts) {
  if (std::abs(source.s1) > kTagTolerance || std::abs(source.s2) > kTagTolerance)
    throw RangeError("the H/V decomposition estimator needs s1 = s2 = 0");
  if (std::abs(source.s3) > 1.0 + kTagTolerance) throw InvalidState("|s3| exceeds 1");
  if (photons_per_branch < 2) throw RangeError("need at least two photons per branch");

  DecomposedD out;
  out.weight = {0.5 * (1.0 + source.s3), 0.5 * (1.0 - source.s3)};
  const std::array<PolDensity, 2> inputs{density_from_stokes({0.0, 0.0, 1.0}),
                                         density_from_stokes({0.0, 0.0, -1.0})};
  double value = 0.0;
  for (int j = 0; j < 2; ++j) {
    out.counts[j] = sample_counts(cfg, inputs[j], optimal_branch_analyzer(cfg.theta1_deg, j),
                                  photons_per_branch / 2, rng);
    out.likelihood[j] = estimate_likelihood(out.counts[j], rng, opts);
    value += out.weight[j] * (2.0 * out.likelihood[j].value - 1.0);
  }
  std::vector<double> reps(out.likelihood[0].replicates.size());
  for (std::size_t b = 0; b < reps.size(); ++b)
    reps[b] = out.weight[0] * (2.0 * out.likelihood[0].replicates[b] - 1.0) +
              out.weight[1] * (2.0 * out.likelihood[1].replicates[b] - 1.0);
  out.d = with_interval(value, std::move(reps), opts.level);
  return out;
}

std::vector<double> uniform_phase_grid(std::size_t points) {
  std::vector<double> phi(points);
  for (std::size_t k = 0; k < points; ++k)
    phi[k] = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(points);
  return phi;
}

VisibilityMC estimate_visibility_mc(const InterferometerConfig& cfg, const PolDensity& rho_in,
                                    std::span<const double> phi_grid,
                                    std::uint64_t photons_per_point, RngStream& rng,
                                    const BootstrapOptions& opts) {
  if (phi_grid.size() < 8) throw RangeError("visibility estimate needs at least 8 phase points");
  if (photons_per_point < 1) throw RangeError("need at least one photon per phase point");
  VisibilityMC out;
  out.counts.resize(phi_grid.size());
  std::vector<double> intensity(phi_grid.size());
  for (std::size_t k = 0; k < phi_grid.size(); ++k) {
    InterferometerConfig c = cfg;
    c.phase_phi = phi_grid[k];
    const double p =
        std::clamp(trace(output_matrix(c, rho_in, 1, cfg.visibility_scale)).real(), 0.0, 1.0);
    out.counts[k] = draw_binomial(photons_per_point, p, rng);
    intensity[k] = static_cast<double>(out.counts[k]);
  }
  const double value = fit_visibility(phi_grid, intensity).visibility;
  const auto n = static_cast<double>(photons_per_point);
  auto reps = bootstrap(rng, opts, [&](RngStream& r) {
    std::vector<double> resampled(out.counts.size());
    for (std::size_t k = 0; k < out.counts.size(); ++k)
      resampled[k] = static_cast<double>(
          draw_binomial(photons_per_point, static_cast<double>(out.counts[k]) / n, r));
    return fit_visibility(phi_grid, resampled).visibility;
  });
  out.v = with_interval(value, std::move(reps), opts.level);
  return out;
}

Closure wpd_closure(const EstimateWithCI& v, const EstimateWithCI& d) {
  Closure c;
  c.value = v.value * v.value + d.value * d.value;
  if (v.replicates.size() == d.replicates.size() && !v.replicates.empty()) {
    std::vector<double> sums(v.replicates.size());
    for (std::size_t b = 0; b < sums.size(); ++b)
      sums[b] = v.replicates[b] * v.replicates[b] + d.replicates[b] * d.replicates[b];
    c.sigma = stddev(sums);
  } else {
    c.sigma = std::hypot(2.0 * v.value * v.sigma(), 2.0 * d.value * d.sigma());
  }
  return c;
}

std::array<AnalyzerSetting, 3> pauli_analyzers() {
  return {AnalyzerSetting{22.5, 0.0, true}, AnalyzerSetting::circular(),
          AnalyzerSetting{0.0, 0.0, true}};
}

Tomography tomography(const PolDensity& rho_source, std::uint64_t photons_per_basis,
                      RngStream& rng, const BootstrapOptions& opts) {
  if (photons_per_basis < 1) throw RangeError("need at least one photon per basis");
  Tomography t;
  const auto analyzers = pauli_analyzers();
  const auto n = static_cast<double>(photons_per_basis);
  std::array<double, 3> raw{};
  for (std::size_t k = 0; k < 3; ++k) {
    const double p_plus = analyzer_probability(rho_source, analyzers[k], Detector::transmit);
    const std::uint64_t plus = draw_binomial(photons_per_basis, p_plus, rng);
    t.counts[k] = {plus, photons_per_basis - plus};
    raw[k] = (2.0 * static_cast<double>(plus) - n) / n;
  }
  const auto fid = [](const Vec3& s) {
    const StokesVector c = clip_to_ball(StokesVector::from(s));
    return fidelity(density_from_stokes(c), unpolarized());
  };
  t.estimate = clip_to_ball({raw[0], raw[1], raw[2]});
  t.degree_of_polarization = t.estimate.norm();

  // One replicate resamples all three bases together.
  const auto reps = bootstrap(rng, opts, [&](RngStream& r) {
    Vec3 s{};
    for (std::size_t k = 0; k < 3; ++k) {
      const double q = static_cast<double>(t.counts[k][0]) / n;
      s[k] = (2.0 * static_cast<double>(draw_binomial(photons_per_basis, q, r)) - n) / n;
    }
    return s;
  });
  for (std::size_t k = 0; k < 3; ++k) {
    std::vector<double> comp(reps.size());
    for (std::size_t b = 0; b < reps.size(); ++b) comp[b] = reps[b][k];
    t.s[k] = with_interval(raw[k], std::move(comp), opts.level);
  }
  std::vector<double> fids(reps.size());
  for (std::size_t b = 0; b < reps.size(); ++b) fids[b] = fid(reps[b]);
  t.fidelity_unpolarized = with_interval(fid(t.estimate.vec()), std::move(fids), opts.level);
  return t;
}

double loglog_slope(std::span<const double> n, std::span<const double> err) {
  if (n.size() != err.size() || n.size() < 2) throw RangeError("slope needs two or more points");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n.size(); ++i) {
    mx += std::log(n[i]);
    my += std::log(err[i]);
  }
  mx /= static_cast<double>(n.size());
  my /= static_cast<double>(n.size());
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < n.size(); ++i) {
    const double dx = std::log(n[i]) - mx;
    sxy += dx * (std::log(err[i]) - my);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

}  // namespace wpd
