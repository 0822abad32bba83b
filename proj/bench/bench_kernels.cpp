// Serial reference vs OpenMP for the parallel kernels. Argument 0 runs the
// serial path, 1 the parallel one. Thread count follows OMP_NUM_THREADS.

#include <benchmark/benchmark.h>

#include <vector>

#include "wpd/duality.hpp"
#include "wpd/interferometer.hpp"
#include "wpd/montecarlo.hpp"

using namespace wpd;

namespace {

Exec exec_of(const benchmark::State& st) { return st.range(0) == 0 ? Exec::serial : Exec::parallel; }

void BM_FringeScan(benchmark::State& st) {
  InterferometerConfig cfg;
  cfg.theta1_deg = 22.5;
  SpectralModel spec;
  spec.bandwidth_nm = 36.0;
  spec.shape = SpectralShape::rectangular;
  std::vector<double> delta;
  for (int k = -30000; k <= 30000; ++k) delta.push_back(1e-3 * k);
  const PolDensity rho = unpolarized();
  for (auto _ : st)
    benchmark::DoNotOptimize(fringe_scan(cfg, rho, spec, delta, AnalyzerSetting::circular(), exec_of(st)));
}

void BM_LikelihoodSearch(benchmark::State& st) {
  const PolDensity a = density_from_stokes({0.1, 0.5, -0.2});
  const PolDensity b = density_from_stokes({-0.3, 0.1, 0.4});
  for (auto _ : st) benchmark::DoNotOptimize(max_likelihood_search(a, b, 100000, 3, exec_of(st)));
}

void BM_LikelihoodBootstrap(benchmark::State& st) {
  InterferometerConfig cfg;
  cfg.theta1_deg = 22.5;
  RngStream rng(1, 0);
  const CountRecord counts =
      sample_counts(cfg, unpolarized(), optimal_branch_analyzer(22.5, 0), 100000, rng);
  for (auto _ : st) {
    RngStream r(2, 0);
    benchmark::DoNotOptimize(estimate_likelihood(counts, r, {2000, 0.95, exec_of(st)}));
  }
}

void BM_VisibilityMC(benchmark::State& st) {
  InterferometerConfig cfg;
  cfg.theta1_deg = 22.5;
  const auto phi = uniform_phase_grid(64);
  for (auto _ : st) {
    RngStream r(3, 0);
    benchmark::DoNotOptimize(estimate_visibility_mc(cfg, unpolarized(), phi, 100000, r, {2000, 0.95, exec_of(st)}));
  }
}

}  // namespace

BENCHMARK(BM_FringeScan)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_LikelihoodSearch)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_LikelihoodBootstrap)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_VisibilityMC)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
