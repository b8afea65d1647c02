#include <benchmark/benchmark.h>

#include <algorithm>

#include "eventrail/hdbscan.hpp"
#include "eventrail/rng.hpp"

namespace {

// Riders bunched into trains every ten minutes, the shape the recovery step sees.
std::vector<std::int64_t> evening(std::size_t n) {
  eventrail::Rng rng(n);
  std::vector<std::int64_t> pts;
  pts.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    const auto train = rng.uniform_int(0, 11);
    pts.push_back(train * 600 + rng.uniform_int(0, 60));
  }
  std::sort(pts.begin(), pts.end());
  return pts;
}

void BM_Hdbscan1d(benchmark::State& state) {
  const auto pts = evening(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(eventrail::hdbscan_1d(pts));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Hdbscan1d)->RangeMultiplier(4)->Range(1 << 10, 1 << 16)->Complexity();

}  // namespace

BENCHMARK_MAIN();
