#include <benchmark/benchmark.h>

#include <algorithm>

#include "eventrail/boardsim.hpp"
#include "eventrail/rng.hpp"

namespace {

// Two stations, a train every eight minutes over three hours, congested.
eventrail::SimInput evening(std::int64_t riders) {
  eventrail::Rng rng(static_cast<std::uint64_t>(riders));
  eventrail::SimInput in;
  in.stations = {"UP", "DOWN"};
  for (eventrail::Seconds t = 480; t <= 3 * 3600; t += 480) in.trains.push_back({{t, t + 90}, 700});
  in.arrivals.resize(2);
  for (std::int64_t k = 0; k < riders; ++k) {
    in.arrivals[static_cast<std::size_t>(k % 4 == 0)].push_back(rng.uniform_int(0, 3 * 3600));
  }
  for (auto& a : in.arrivals) std::sort(a.begin(), a.end());
  return in;
}

void BM_SimulateBoarding(benchmark::State& state) {
  const auto in = evening(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(eventrail::simulate_boarding(in));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SimulateBoarding)->RangeMultiplier(4)->Range(1 << 10, 1 << 16);

// The capacity grid search calls this once per candidate.
void BM_SimulateCells(benchmark::State& state) {
  const auto in = evening(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(eventrail::simulate_cells(in));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SimulateCells)->RangeMultiplier(4)->Range(1 << 10, 1 << 16);

}  // namespace

BENCHMARK_MAIN();
