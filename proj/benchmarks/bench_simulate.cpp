#include <benchmark/benchmark.h>

#include "rtail/simulate.hpp"

using namespace rtail;

static void BM_RetrialReplication(benchmark::State& state) {
  ModelParams m(1.0, 1.0, BatchDist::deterministic(1), ServiceDist::lomax(0.75, 2.5));
  SimConfig cfg;
  cfg.horizon = static_cast<double>(state.range(0));
  cfg.j_max = 40;
  std::uint64_t events = 0;
  std::uint64_t r = 0;
  for (auto _ : state) events += run_replication(m, cfg, SimMode::retrial, r++).events;
  state.counters["events/s"] = benchmark::Counter(double(events), benchmark::Counter::kIsRate);
}
BENCHMARK(BM_RetrialReplication)->Arg(100000)->Arg(1000000)->Unit(benchmark::kMillisecond);

static void BM_StandardReplication(benchmark::State& state) {
  ModelParams m(0.5, 1.0, BatchDist::geometric(0.3), ServiceDist::pareto(0.4, 2.2));
  SimConfig cfg;
  cfg.horizon = static_cast<double>(state.range(0));
  std::uint64_t r = 0;
  for (auto _ : state) benchmark::DoNotOptimize(run_replication(m, cfg, SimMode::standard, r++));
}
BENCHMARK(BM_StandardReplication)->Arg(100000)->Unit(benchmark::kMillisecond);
