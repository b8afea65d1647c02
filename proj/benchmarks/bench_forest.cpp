#include <benchmark/benchmark.h>

#include <cmath>

#include "eventrail/forest.hpp"
#include "eventrail/rng.hpp"

namespace {

struct Data {
  std::vector<std::vector<double>> x;
  std::vector<double> y;
};

// Roughly the size of a season of event days: a few dozen rows, ten features.
Data rows(std::size_t n) {
  eventrail::Rng rng(n);
  Data d;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> r(10);
    for (auto& v : r) v = rng.uniform();
    d.y.push_back(5000.0 * r[0] + 2000.0 * (r[1] > 0.5) + 300.0 * std::sin(6.0 * r[2]));
    d.x.push_back(std::move(r));
  }
  return d;
}

void BM_FitForest(benchmark::State& state) {
  const auto d = rows(static_cast<std::size_t>(state.range(0)));
  eventrail::ForestParams p;
  p.trees = 500;
  p.seed = 1;
  for (auto _ : state) benchmark::DoNotOptimize(eventrail::fit_forest(d.x, d.y, p));
}
BENCHMARK(BM_FitForest)->Arg(40)->Arg(160)->Arg(640)->Unit(benchmark::kMillisecond);

void BM_ForestPredict(benchmark::State& state) {
  const auto d = rows(160);
  eventrail::ForestParams p;
  p.trees = 1500;
  p.seed = 1;
  const auto forest = eventrail::fit_forest(d.x, d.y, p);
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(forest.predict(d.x[i++ % d.x.size()]));
}
BENCHMARK(BM_ForestPredict);

}  // namespace

BENCHMARK_MAIN();
