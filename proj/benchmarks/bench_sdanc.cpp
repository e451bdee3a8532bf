#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "sdanc/analysis.hpp"
#include "sdanc/config.hpp"
#include "sdanc/experiment.hpp"
#include "sdanc/lifting.hpp"
#include "sdanc/lti.hpp"

using namespace sdanc;

static void BM_Expm(benchmark::State& state) {
  const auto n = state.range(0);
  std::mt19937_64 rng(1);
  std::normal_distribution<double> g(0.0, 1.0);
  Matrix a(n, n);
  for (auto& v : a.reshaped()) v = g(rng);
  for (auto _ : state) benchmark::DoNotOptimize(expm(a));
}
BENCHMARK(BM_Expm)->Arg(4)->Arg(10)->Arg(20);

static void BM_DiscretizeLifted(benchmark::State& state) {
  const auto F = secondary_path(default_config());
  const int L = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(discretize_lifted(F, 1.0, L));
}
BENCHMARK(BM_DiscretizeLifted)->Arg(1)->Arg(8)->Arg(64);

static void BM_RunSingle(benchmark::State& state) {
  const auto cfg = default_config();
  const int L = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(run_single(cfg, L));
}
BENCHMARK(BM_RunSingle)->Arg(1)->Arg(8)->Unit(benchmark::kMillisecond);

static void BM_SpectralBound(benchmark::State& state) {
  const auto F = secondary_path(default_config());
  std::mt19937_64 rng(2);
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<double> x(100);
  for (auto& v : x) v = g(rng);
  const int grid = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(spectral_bound(F, x, 1.0, grid, 64));
}
BENCHMARK(BM_SpectralBound)->Arg(1024)->Arg(4096)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
