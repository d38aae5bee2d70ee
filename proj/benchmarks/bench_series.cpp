#include <benchmark/benchmark.h>

#include "rtail/series.hpp"

using namespace rtail;

static void BM_Mul(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  auto a = batch_pmf_series(BatchDist::pareto_tail(1.0, 1.5), n);
  auto b = batch_pmf_series(BatchDist::geometric(0.5), n);
  for (auto _ : state) benchmark::DoNotOptimize(mul(a, b));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Mul)->RangeMultiplier(4)->Range(256, 16384)->Complexity(benchmark::oNSquared);

static void BM_Compose(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  auto outer = batch_pmf_series(BatchDist::pareto_tail(1.0, 2.5), n);
  auto inner = batch_pmf_series(BatchDist::geometric(0.3), n);
  for (auto _ : state) benchmark::DoNotOptimize(compose(outer, inner));
}
BENCHMARK(BM_Compose)->RangeMultiplier(4)->Range(256, 4096);

static void BM_CompoundPoisson(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  auto batch = batch_pmf_series(BatchDist::pareto_tail(2.0, 1.8), n);
  for (auto _ : state) benchmark::DoNotOptimize(compound_poisson(3.0, batch));
}
BENCHMARK(BM_CompoundPoisson)->RangeMultiplier(4)->Range(256, 4096);

static void BM_CompoundOverService(benchmark::State& state) {
  ModelParams m(1.0, 1.0, BatchDist::deterministic(1), ServiceDist::lomax(0.75, 2.5));
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(compound_over_service(m, ServiceView::service, n));
}
BENCHMARK(BM_CompoundOverService)->RangeMultiplier(4)->Range(1024, 16384)->Unit(benchmark::kMillisecond);
