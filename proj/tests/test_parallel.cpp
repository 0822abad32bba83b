#include <doctest.h>

#include <algorithm>
#include <cstdlib>
#include <stdexcept>

#include "wpd/cli/scenarios.hpp"
#include "wpd/duality.hpp"
#include "wpd/montecarlo.hpp"
#include "wpd/parallel.hpp"

using namespace wpd;

TEST_CASE("ordered_map keeps index order under a real thread pool") {
  omp_set_num_threads(4);
  const auto out = ordered_map(1000, [](std::size_t i) { return i * i; }, Exec::parallel);
  REQUIRE(out.size() == 1000);
  for (std::size_t i = 0; i < out.size(); ++i) CHECK(out[i] == i * i);
  CHECK(ordered_map(0, [](std::size_t i) { return i; }, Exec::parallel).empty());
}

TEST_CASE("ordered_map rethrows worker exceptions") {
  omp_set_num_threads(4);
  const auto f = [](std::size_t i) -> int {
    if (i == 37) throw std::runtime_error("boom");
    return static_cast<int>(i);
  };
  CHECK_THROWS_WITH_AS(ordered_map(100, f, Exec::parallel), "boom", std::runtime_error);
  CHECK_THROWS_AS(ordered_map(100, f, Exec::serial), std::runtime_error);
}

TEST_CASE("thread cap from the environment") {
  // The cap never exceeds the processor count.
  setenv("WPD_LAB_THREADS", "1", 1);
  CHECK(configure_threads_from_env() == 1);
  setenv("WPD_LAB_THREADS", "64", 1);
  CHECK(configure_threads_from_env() == std::min(64, omp_get_num_procs()));
  setenv("WPD_LAB_THREADS", "junk", 1);
  CHECK(configure_threads_from_env() >= 1);
  unsetenv("WPD_LAB_THREADS");
  omp_set_num_threads(4);
}

TEST_CASE("serial and parallel kernels agree bit for bit") {
  omp_set_num_threads(4);
  cli::RunConfig cfg;
  cfg.stokes = "0,0,0;0,0.3,0.3;0.6,0,0.8";
  CHECK(cli::run_sweep(cfg, Exec::serial).csv == cli::run_sweep(cfg, Exec::parallel).csv);

  cfg.mode = cli::Mode::montecarlo;
  cfg.stokes = "0,0,0.2";
  cfg.photons = 5000;
  cfg.resamples = 300;
  CHECK(cli::run_montecarlo(cfg, Exec::serial).csv == cli::run_montecarlo(cfg, Exec::parallel).csv);

  const PolDensity a = density_from_stokes({0.1, 0.5, -0.2});
  const PolDensity b = density_from_stokes({-0.3, 0.1, 0.4});
  const LikelihoodSearch s = max_likelihood_search(a, b, 8000, 3, Exec::serial);
  const LikelihoodSearch p = max_likelihood_search(a, b, 8000, 3, Exec::parallel);
  CHECK(s.l_max == p.l_max);
  CHECK(s.best_axis == p.best_axis);

  InterferometerConfig ic;
  ic.theta1_deg = 22.5;
  RngStream r1(4, 0), r2(4, 0);
  const auto phi = uniform_phase_grid(16);
  const VisibilityMC v1 = estimate_visibility_mc(ic, unpolarized(), phi, 1000, r1, {400, 0.95, Exec::serial});
  const VisibilityMC v2 = estimate_visibility_mc(ic, unpolarized(), phi, 1000, r2, {400, 0.95, Exec::parallel});
  CHECK(v1.v.replicates == v2.v.replicates);
}
