#include <benchmark/benchmark.h>

#include "twosided/dp_oracle.hpp"
#include "twosided/exceedance.hpp"
#include "twosided/series.hpp"
#include "twosided/simulator.hpp"

using namespace twosided;

static void BM_PhiFunctional(benchmark::State& state) {
  const int M = static_cast<int>(state.range(0));
  const auto c = symmetric_config(M);
  for (auto _ : state) benchmark::DoNotOptimize(phi_functional(c, FunctionalArgs::ones(), M));
}
BENCHMARK(BM_PhiFunctional)->Arg(4)->Arg(8)->Arg(16)->Arg(32);

static void BM_SeriesReciprocal(benchmark::State& state) {
  const int M = static_cast<int>(state.range(0));
  const auto c = symmetric_config(M);
  const auto g = expand_gamma_series(c.rates.lambda_a, c.rates.lambda_b, c.delta, 1.0, 1.0, M, M);
  for (auto _ : state) benchmark::DoNotOptimize(series_reciprocal(g));
}
BENCHMARK(BM_SeriesReciprocal)->Arg(8)->Arg(32)->Arg(64);

static void BM_SimulateBatch(benchmark::State& state) {
  const auto c = symmetric_config(static_cast<int>(state.range(0)));
  std::uint64_t s = 1;
  for (auto _ : state) benchmark::DoNotOptimize(simulate_batch(c, 10000, RunSeed{s++}));
  state.SetItemsProcessed(state.iterations() * 10000);
}
BENCHMARK(BM_SimulateBatch)->Arg(3)->Arg(8)->Unit(benchmark::kMillisecond);

static void BM_DpOracle(benchmark::State& state) {
  const int M = static_cast<int>(state.range(0));
  const auto c = symmetric_config(M);
  for (auto _ : state) benchmark::DoNotOptimize(dp_oracle(c, M));
}
BENCHMARK(BM_DpOracle)->Arg(4)->Arg(8)->Arg(12)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
