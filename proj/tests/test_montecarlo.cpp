#include <doctest.h>

#include <cmath>
#include <numbers>

#include "wpd/duality.hpp"
#include "wpd/errors.hpp"
#include "wpd/montecarlo.hpp"

using namespace wpd;

namespace {

constexpr double kPi = std::numbers::pi;

InterferometerConfig config(double t1) {
  InterferometerConfig c;
  c.theta1_deg = t1;
  return c;
}

CountRecord record(std::uint64_t n00, std::uint64_t n01, std::uint64_t n10, std::uint64_t n11) {
  // Arguments are N_{p,d} listed detector by detector: (N_0,10, N_1,10, N_0,11, N_1,11).
  CountRecord c;
  c.n[0][0] = n00;
  c.n[1][0] = n01;
  c.n[0][1] = n10;
  c.n[1][1] = n11;
  return c;
}

double d_true(double t1, double s2) {
  return std::sqrt(1.0 - s2 * s2) * std::abs(std::sin(2.0 * t1 * kPi / 180.0));
}

}  // namespace

TEST_CASE("rng streams are reproducible and distinct") {
  RngStream a(42, 3), b(42, 3), c(42, 4), d(43, 3);
  const auto x = a.engine()();
  CHECK(x == b.engine()());
  CHECK(x != c.engine()());
  CHECK(x != d.engine()());
  CHECK(derive_seed(1, 0) != derive_seed(0, 1));
  // Known first output pins the algorithm.
  RngStream pin(1, 0);
  static_assert(splitmix64(0) == 0xe220a8397b1dcdafULL);
  CHECK(pin.child(0).seed() == derive_seed(1, 0));
}

TEST_CASE("sample_multinomial") {
  RngStream rng(1, 0);
  const std::vector<double> point{1.0, 0.0, 0.0, 0.0};
  CHECK(sample_multinomial(point, 100, rng) == std::vector<std::uint64_t>{100, 0, 0, 0});

  const std::vector<double> half{0.5, 0.5};
  const auto n = sample_multinomial(half, 1000000, rng);
  CHECK(n[0] + n[1] == 1000000);
  CHECK(std::abs(static_cast<double>(n[0]) - 500000.0) < 5.0 * 500.0);

  const std::vector<double> bad{-0.1, 1.1};
  CHECK_THROWS_AS(sample_multinomial(bad, 10, rng), RangeError);
  const std::vector<double> zero{0.0, 0.0};
  CHECK_THROWS_AS(sample_multinomial(zero, 10, rng), RangeError);

  // Unnormalized weights behave like their normalized version.
  RngStream r1(5, 1), r2(5, 1);
  const std::vector<double> w{2.0, 6.0, 2.0}, p{0.2, 0.6, 0.2};
  CHECK(sample_multinomial(w, 1000, r1) == sample_multinomial(p, 1000, r2));
}

TEST_CASE("sample_counts") {
  const PolDensity h = density_from_stokes({0, 0, 1});
  const InterferometerConfig cfg = config(22.5);
  const AnalyzerSetting a = optimal_branch_analyzer(22.5, 0);

  RngStream r1(9, 2), r2(9, 2);
  const CountRecord c1 = sample_counts(cfg, h, a, 50000, r1);
  const CountRecord c2 = sample_counts(cfg, h, a, 50000, r2);
  CHECK(c1 == c2);
  CHECK(c1.path_total(0) == 50000);
  CHECK(c1.path_total(1) == 50000);

  const double l = 0.5 * (1.0 + std::sin(kPi / 4));
  const double sigma = std::sqrt(l * (1.0 - l) / 100000.0);
  CHECK(std::abs(likelihood_from_counts(c1) - l) < 3.0 * sigma);

  RngStream r3(9, 2);
  CHECK_THROWS_AS(sample_counts(cfg, h, a, 0, r3), RangeError);
}

TEST_CASE("likelihood estimator") {
  RngStream rng(3, 0);
  CHECK(estimate_likelihood(record(100, 0, 0, 100), rng).value == 1.0);
  CHECK(estimate_likelihood(record(50, 50, 50, 50), rng).value == 0.5);
  const EstimateWithCI e = estimate_likelihood(record(85, 15, 86, 14), rng);
  CHECK(e.value == doctest::Approx(0.855).epsilon(1e-15));
  CHECK(e.ci_low <= e.value);
  CHECK(e.value <= e.ci_high);
  CHECK(e.replicates.size() == 2000);
  CHECK(e.sigma() > 0.0);
  CHECK_THROWS_AS(estimate_likelihood(CountRecord{}, rng), EmptyCounts);

  RngStream s1(8, 1), s2(8, 1);
  const EstimateWithCI ser = estimate_likelihood(record(85, 15, 86, 14), s1, {500, 0.95, Exec::serial});
  const EstimateWithCI par = estimate_likelihood(record(85, 15, 86, 14), s2, {500, 0.95, Exec::parallel});
  CHECK(ser.replicates == par.replicates);

  RngStream s3(8, 1);
  const EstimateWithCI none = estimate_likelihood(record(85, 15, 86, 14), s3, {0, 0.95, Exec::serial});
  CHECK(none.replicates.empty());
  CHECK(none.ci_low == none.value);
}

TEST_CASE("optimal branch analyzer") {
  CHECK(optimal_branch_analyzer(22.5, 0).hwp_angle_deg == doctest::Approx(11.25));
  CHECK(optimal_branch_analyzer(22.5, 1).hwp_angle_deg == doctest::Approx(56.25));
  CHECK(optimal_branch_analyzer(10, 0).qwp_angle_deg == 0.0);
  // Noise-free likelihood reaches (1 + D)/2 on both branches.
  for (double t1 : {0.0, 12.0, 22.5, 45.0}) {
    for (int j = 0; j < 2; ++j) {
      const PolDensity in = density_from_stokes({0, 0, j == 0 ? 1.0 : -1.0});
      const AnalyzerSetting a = optimal_branch_analyzer(t1, j);
      double l = 0.0;
      for (Detector d : {Detector::transmit, Detector::reflect}) {
        double best = 0.0;
        for (int p = 0; p < 2; ++p)
          best = std::max(best, analyzer_probability(conditional_output(config(t1), in, p, 1).state, a, d));
        l += 0.5 * best;
      }
      CHECK(l == doctest::Approx(0.5 * (1.0 + d_true(t1, 0.0))).epsilon(1e-12));
    }
  }
}

TEST_CASE("decomposed D estimator") {
  RngStream rng(2024, 0);
  const DecomposedD d45 = estimate_D_decomposed(config(45), {0, 0, 0}, 100000, rng);
  CHECK(std::abs(d45.d.value - 1.0) <= std::max(3.0 * d45.d.sigma(), 1e-12));

  const DecomposedD d0 = estimate_D_decomposed(config(0), {0, 0, 0}, 100000, rng);
  CHECK(d0.d.value >= 0.0);
  CHECK(d0.d.value <= 3.0 * d0.d.sigma());

  const DecomposedD d22 = estimate_D_decomposed(config(22.5), {0, 0, 0}, 100000, rng);
  CHECK(std::abs(d22.d.value - std::sin(kPi / 4)) <= 3.0 * d22.d.sigma());
  CHECK(d22.counts[0].path_total(0) == 50000);
  CHECK(d22.d.ci_low <= d22.d.value);
  CHECK(d22.d.value <= d22.d.ci_high);

  const DecomposedD tilted = estimate_D_decomposed(config(30), {0, 0, 0.6}, 100000, rng);
  CHECK(tilted.weight[0] == doctest::Approx(0.8));
  CHECK(std::abs(tilted.d.value - d_true(30, 0.0)) <= 3.0 * tilted.d.sigma());

  CHECK_THROWS_AS(estimate_D_decomposed(config(30), {0.1, 0, 0}, 1000, rng), RangeError);
  CHECK_THROWS_AS(estimate_D_decomposed(config(30), {0, 0.1, 0}, 1000, rng), RangeError);

  RngStream a(5, 5), b(5, 5);
  const DecomposedD x = estimate_D_decomposed(config(15), {0, 0, 0}, 10000, a);
  const DecomposedD y = estimate_D_decomposed(config(15), {0, 0, 0}, 10000, b);
  CHECK(x.counts[0] == y.counts[0]);
  CHECK(x.counts[1] == y.counts[1]);
  CHECK(x.d.replicates == y.d.replicates);
}

TEST_CASE("Monte Carlo visibility") {
  const auto phi = uniform_phase_grid(32);
  CHECK(phi.size() == 32);
  CHECK(phi[16] == doctest::Approx(kPi));

  RngStream rng(77, 0);
  const VisibilityMC one = estimate_visibility_mc(config(0), unpolarized(), phi, 100000, rng);
  CHECK(std::abs(one.v.value - 1.0) <= 3.0 * one.v.sigma() + 1e-12);

  // V = 0: only the positive bias floor (about sqrt(pi / (points N)) ~ 1e-3) remains.
  const VisibilityMC zero = estimate_visibility_mc(config(45), unpolarized(), phi, 100000, rng);
  CHECK(zero.v.value < 0.005);

  const VisibilityMC half = estimate_visibility_mc(config(22.5), unpolarized(), phi, 100000, rng);
  CHECK(std::abs(half.v.value - std::sqrt(0.5)) <= 3.0 * half.v.sigma());
  CHECK(half.counts.size() == 32);

  const std::vector<double> few(7, 0.0);
  CHECK_THROWS_AS(estimate_visibility_mc(config(0), unpolarized(), few, 10, rng), RangeError);
}

TEST_CASE("closure V^2 + D^2 at the Monte Carlo level") {
  const auto phi = uniform_phase_grid(32);
  std::uint64_t stream = 0;
  for (double t1 : {0.0, 15.0, 22.5, 30.0, 45.0}) {
    RngStream rng(11, stream++);
    const VisibilityMC v = estimate_visibility_mc(config(t1), unpolarized(), phi, 100000, rng);
    const DecomposedD d = estimate_D_decomposed(config(t1), {0, 0, 0}, 100000, rng);
    const Closure c = wpd_closure(v.v, d.d);
    CHECK(std::abs(c.value - 1.0) <= 3.0 * c.sigma + 1e-12);
  }
}

TEST_CASE("tomography") {
  RngStream rng(31, 0);
  const Tomography u = tomography(unpolarized(), 1000000, rng);
  for (int k = 0; k < 3; ++k) CHECK(std::abs(u.s[k].value) < 5.0 * 1e-3);
  CHECK(u.counts[0][0] + u.counts[0][1] == 1000000);

  const Tomography h = tomography(density_from_stokes({0, 0, 1}), 10000, rng);
  CHECK(std::abs(h.s[2].value - 1.0) <= std::max(3.0 * h.s[2].sigma(), 1e-12));

  const Tomography w = tomography(density_from_stokes({0, 0, 0.061}), 1000000, rng);
  const double sig = std::sqrt((1.0 - 0.061 * 0.061) / 1e6);
  CHECK(std::abs(w.s[2].value - 0.061) < 3.0 * sig);
  CHECK(w.fidelity_unpolarized.value == doctest::Approx(0.5 + 0.5 * std::sqrt(1 - 0.061 * 0.061)).epsilon(1e-4));
  CHECK(w.degree_of_polarization == doctest::Approx(0.061).epsilon(0.05));

  // Each Pauli analyzer measures its own component.
  const Vec3 s{0.3, -0.5, 0.6};
  const auto a = pauli_analyzers();
  for (int k = 0; k < 3; ++k) {
    const double p = analyzer_probability(density_from_stokes(StokesVector::from(s)), a[k], Detector::transmit);
    CHECK(2.0 * p - 1.0 == doctest::Approx(s[k]).epsilon(1e-14));
  }
  CHECK_THROWS_AS(tomography(unpolarized(), 0, rng), RangeError);
}

TEST_CASE("bootstrap intervals cover the truth") {
  // 200 independent runs of the decomposed D estimator at theta1 = 22.5.
  const double truth = std::sin(kPi / 4);
  int covered = 0;
  for (std::uint64_t run = 0; run < 200; ++run) {
    RngStream rng(555, run);
    const DecomposedD d = estimate_D_decomposed(config(22.5), {0, 0, 0}, 20000, rng, {1000, 0.95, Exec::parallel});
    if (d.d.ci_low <= truth && truth <= d.d.ci_high) ++covered;
  }
  MESSAGE("coverage ", covered, "/200");
  CHECK(covered >= 180);
}

TEST_CASE("estimation error scales as 1/sqrt(N)") {
  const std::vector<double> ns{1e3, 1e4, 1e5};
  const double truth = std::sin(kPi / 4);
  std::vector<double> rms;
  for (double n : ns) {
    double acc = 0.0;
    const int trials = 40;
    for (int t = 0; t < trials; ++t) {
      RngStream rng(808, static_cast<std::uint64_t>(n) + t);
      const DecomposedD d =
          estimate_D_decomposed(config(22.5), {0, 0, 0}, static_cast<std::uint64_t>(n), rng, {0, 0.95, Exec::serial});
      acc += (d.d.value - truth) * (d.d.value - truth);
    }
    rms.push_back(std::sqrt(acc / trials));
  }
  const double slope = loglog_slope(ns, rms);
  MESSAGE("slope ", slope);
  CHECK(slope >= -0.65);
  CHECK(slope <= -0.35);

  const std::vector<double> x{1, 10, 100}, y{1, 0.1, 0.01};
  CHECK(loglog_slope(x, y) == doctest::Approx(-1.0));
}
