#include <benchmark/benchmark.h>

#include "rtail/exact.hpp"

using namespace rtail;

static void BM_ComputeExactE1(benchmark::State& state) {
  ModelParams m(1.0, 1.0, BatchDist::deterministic(1), ServiceDist::lomax(0.75, 2.5));
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(compute_exact(m, n));
}
BENCHMARK(BM_ComputeExactE1)->RangeMultiplier(2)->Range(2048, 16384)->Unit(benchmark::kMillisecond);

static void BM_ComputeExactHeavyBatches(benchmark::State& state) {
  ModelParams m(0.5, 1.0, BatchDist::pareto_tail(1.0, 2.5), ServiceDist::lomax(0.75, 2.5));
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(compute_exact(m, n));
}
BENCHMARK(BM_ComputeExactHeavyBatches)->Arg(2048)->Arg(8192)->Unit(benchmark::kMillisecond);
