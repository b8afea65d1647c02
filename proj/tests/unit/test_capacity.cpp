#include <gtest/gtest.h>

#include <algorithm>

#include "eventrail/capacity.hpp"
#include "eventrail/error.hpp"
#include "eventrail/rng.hpp"
#include "scenarios.hpp"

namespace eventrail {
namespace {

// One station, congested trains, observed proportions simulated at `truth`.
CapacityObservation self_consistent(std::int64_t truth, std::uint64_t seed) {
  Rng rng(seed);
  CapacityObservation obs;
  obs.input.stations = {"S"};
  Seconds t = 1000;
  std::vector<Seconds> arrivals;
  for (int i = 0; i < 10; ++i) {
    const Seconds next = t + rng.uniform_int(200, 400);
    const auto n = rng.uniform_int(truth / 2, truth * 3 / 2);
    for (int k = 0; k < n; ++k) arrivals.push_back(rng.uniform_int(t + 1, next));
    obs.input.trains.push_back({{next}, 0});
    t = next;
  }
  std::sort(arrivals.begin(), arrivals.end());
  obs.input.arrivals = {arrivals};
  obs.loss_stations = {0};
  SimInput truth_input = obs.input;
  for (auto& tr : truth_input.trains) tr.capacity = truth;
  const auto cells = simulate_cells(truth_input);
  obs.observed.assign(1, {});
  for (const auto& row : cells) obs.observed[0].push_back(row[0].proportion_of_new);
  return obs;
}

TEST(MaeLoss, Examples) {
  const std::vector<double> a{0.5, 0.0};
  const std::vector<double> b{0.0, 0.5};
  EXPECT_EQ(mae_loss(a, a), 0.0);
  EXPECT_DOUBLE_EQ(mae_loss(a, b), 0.5);
  EXPECT_DOUBLE_EQ(mae_loss(std::vector<double>{0.2}, std::vector<double>{0.7}), 0.5);
  try {
    mae_loss(a, std::vector<double>{1.0});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::LengthMismatch);
  }
}

TEST(EstimateCapacity, RecoversTheGeneratingCapacity) {
  for (std::int64_t truth : {400, 576, 707, 900}) {
    const auto obs = self_consistent(truth, static_cast<std::uint64_t>(truth));
    const auto est = estimate_capacity(obs);
    EXPECT_EQ(est.best_capacity, truth);
    EXPECT_EQ(est.loss_curve.at(truth), 0.0);
    EXPECT_EQ(est.best_loss, 0.0);
    for (const auto& [c, loss] : est.loss_curve) EXPECT_GE(loss, 0.0);
    EXPECT_EQ(est.loss_curve.size(), 901u);
  }
}

TEST(EstimateCapacity, SingleCandidateAndOrderInvariance) {
  const auto obs = self_consistent(650, 3);
  const std::vector<std::int64_t> one{812};
  EXPECT_EQ(estimate_capacity(obs, one).best_capacity, 812);

  std::vector<std::int64_t> grid;
  for (std::int64_t c = 500; c <= 800; c += 3) grid.push_back(c);
  const auto forward = estimate_capacity(obs, grid);
  std::reverse(grid.begin(), grid.end());
  EXPECT_EQ(estimate_capacity(obs, grid).best_capacity, forward.best_capacity);
  Rng rng(4);
  for (std::size_t i = grid.size() - 1; i > 0; --i) {
    std::swap(grid[i], grid[static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(i)))]);
  }
  EXPECT_EQ(estimate_capacity(obs, grid).best_capacity, forward.best_capacity);
}

TEST(EstimateCapacity, TiesGoToTheSmallestCapacity) {
  // Nobody is ever left behind above 300, so every candidate scores 0.
  CapacityObservation obs;
  obs.input.stations = {"S"};
  obs.input.trains = {{{100}, 0}, {{200}, 0}};
  obs.input.arrivals = {{10, 20, 150}};
  obs.loss_stations = {0};
  obs.observed = {{0.0, 0.0}};
  EXPECT_EQ(estimate_capacity(obs).best_capacity, 300);
}

TEST(Stability, ZeroNoiseRepeatsTheBaseEstimate) {
  const auto obs = self_consistent(707, 9);
  const CapacityGrid grid{600, 800, 1};
  const auto rep = stability_analysis(obs, grid, 10, 42, 0.0);
  ASSERT_EQ(rep.estimates.size(), 10u);
  for (auto e : rep.estimates) EXPECT_EQ(e, 707);
  EXPECT_EQ(rep.q1, rep.q3);
}

TEST(Stability, ReproducibleAndOrdered) {
  const auto obs = self_consistent(707, 10);
  const CapacityGrid grid{600, 800, 1};
  const auto a = stability_analysis(obs, grid, 20, 7);
  const auto b = stability_analysis(obs, grid, 20, 7);
  EXPECT_EQ(a.estimates, b.estimates);
  EXPECT_EQ(a.runs, 20);
  EXPECT_LE(a.q1, a.median);
  EXPECT_LE(a.median, a.q3);
  const auto c = stability_analysis(obs, grid, 20, 8);
  EXPECT_NE(a.estimates, c.estimates);
}

// The end-to-end estimator on one generated congested evening.
TEST(EstimateCapacity, PipelineOnAGeneratedEvening) {
  const auto spec = testing::capacity_scenario(11, 640);
  const auto cfg = testing::scenario_config(spec, 20 * 3600, 23 * 3600);
  const auto run = testing::run_event(spec, cfg);
  const auto est = estimate_capacity(run.result.observation);
  EXPECT_LE(std::abs(est.best_capacity - 640), 640 * 2 / 100);
}

}  // namespace
}  // namespace eventrail
