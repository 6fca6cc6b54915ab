// Fast vs naive simulator, serial vs parallel replicas, rank decoding.

#include <benchmark/benchmark.h>

#include "srp/convergence.hpp"
#include "srp/reference.hpp"
#include "srp/simulator.hpp"

namespace {

srp::InitialProfile two_atom() {
  return srp::InitialProfile::factorized(srp::JumpRateLaw::discrete({{1.0, 0.5}, {2.0, 0.5}}));
}

// Same events for both simulators: horizon 5, one checkpoint.
void BM_FastSimulator(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    srp::RankingSystem system = srp::RankingSystem::init(two_atom(), n, 1);
    system.advance_to(5.0);
    benchmark::DoNotOptimize(system.positions());
    state.counters["events"] = static_cast<double>(system.events_processed());
  }
}
BENCHMARK(BM_FastSimulator)->Arg(200)->Arg(2000)->Unit(benchmark::kMillisecond);

void BM_NaiveSimulator(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(srp::naive_reference(two_atom(), n, 1, {5.0}));
}
BENCHMARK(BM_NaiveSimulator)->Arg(200)->Arg(2000)->Unit(benchmark::kMillisecond);

// Per-jump cost at fixed event count across sizes.
void BM_JumpsPerSize(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  constexpr double kEvents = 1e6;
  std::uint64_t events = 0;
  for (auto _ : state) {
    srp::RankingSystem system = srp::RankingSystem::init(two_atom(), n, 2);
    system.advance_to(kEvents / (1.5 * static_cast<double>(n)));
    events += system.events_processed();
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(events));
}
BENCHMARK(BM_JumpsPerSize)->Arg(10'000)->Arg(100'000)->Arg(1'000'000)->Unit(benchmark::kMillisecond);

void BM_Replicas(benchmark::State& state, srp::Execution execution) {
  const srp::LimitField field(two_atom());
  srp::ConvergenceSettings settings;
  settings.sizes = {1'000, 2'000, 4'000};
  settings.replicas = 8;
  settings.execution = execution;
  for (auto _ : state) benchmark::DoNotOptimize(srp::convergence_study(field, settings));
}
BENCHMARK_CAPTURE(BM_Replicas, serial, srp::Execution::serial)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Replicas, parallel, srp::Execution::parallel)->Unit(benchmark::kMillisecond);

void BM_Positions(benchmark::State& state, bool parallel) {
  srp::RankingSystem system = srp::RankingSystem::init(two_atom(), 1'000'000, 3);
  system.advance_to(1.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(parallel ? system.positions_parallel() : system.positions());
  }
}
BENCHMARK_CAPTURE(BM_Positions, sweep, false)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Positions, fenwick_parallel, true)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
