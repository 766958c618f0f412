#include <benchmark/benchmark.h>

#include "routed/bounds.hpp"
#include "routed/lhs_geometry.hpp"
#include "routed/lhv_models.hpp"
#include "routed/strategies.hpp"

using namespace routed;

static void BM_Certify(benchmark::State& state) {
  const RoutedStats st{2.7, 0.4, 0.35, 8};
  for (auto _ : state) benchmark::DoNotOptimize(certify(st));
}
BENCHMARK(BM_Certify);

static void BM_MinLinearBound(benchmark::State& state) {
  const int grid = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(min_linear_bound(2.6, 0.4, 8, grid));
}
BENCHMARK(BM_MinLinearBound)->Arg(1000)->Arg(10000);

static void BM_BruteForceLhs(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(brute_force_lhs(n, 20000));
}
BENCHMARK(BM_BruteForceLhs)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);

static void BM_BornTable(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const QubitStrategy s = ideal_strategy(n, 0.9);
  for (auto _ : state) benchmark::DoNotOptimize(correlations(s));
}
BENCHMARK(BM_BornTable)->Arg(2)->Arg(16);

static void BM_LhvSample(benchmark::State& state) {
  const auto kind = static_cast<LhvModelKind>(state.range(0));
  const auto settings = default_settings(kind, 4, 1);
  const std::uint64_t count = 100000;
  VerifyOptions opts;
  opts.threads = 1;
  for (auto _ : state) benchmark::DoNotOptimize(lhv_verify(kind, settings, count, 3, opts));
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * count * settings.size()));
}
BENCHMARK(BM_LhvSample)->DenseRange(0, 3)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
