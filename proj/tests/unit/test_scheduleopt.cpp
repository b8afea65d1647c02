#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>

#include "eventrail/error.hpp"
#include "eventrail/rng.hpp"
#include "eventrail/scheduleopt.hpp"

namespace eventrail {
namespace {

ThroughputCurve curve_of(std::vector<double> percent) {
  ThroughputCurve c;
  c.mean = percent;
  c.percent = std::move(percent);
  return c;
}

ThroughputCurve uniform_curve() { return curve_of(std::vector<double>(24, 1.0 / 24.0)); }

std::vector<Seconds> random_arrivals(Rng& rng, int n, Seconds span, bool ties) {
  std::vector<Seconds> a;
  for (int k = 0; k < n; ++k) a.push_back(rng.uniform_int(0, ties ? span / 20 : span) * (ties ? 20 : 1));
  std::sort(a.begin(), a.end());
  return a;
}

TEST(OptimalSchedule, HandExamples) {
  const std::vector<Seconds> five{1, 2, 3, 4, 5};
  EXPECT_EQ(optimal_schedule(five, 5).departures, std::vector<Seconds>{5});
  std::vector<Seconds> ten(10);
  std::iota(ten.begin(), ten.end(), 1);
  EXPECT_EQ(optimal_schedule(ten, 3).departures, (std::vector<Seconds>{3, 6, 9, 10}));
  try {
    optimal_schedule(std::vector<Seconds>{}, 3);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::EmptyArrivals);
  }
}

TEST(OptimalSchedule, TrainCountIsCeilingOnDistinctArrivals) {
  Rng rng(1);
  for (int trial = 0; trial < 200; ++trial) {
    const auto n = static_cast<int>(rng.uniform_int(1, 400));
    std::vector<Seconds> a(static_cast<std::size_t>(n));
    std::iota(a.begin(), a.end(), 0);
    for (auto& x : a) x *= 3;
    const auto cap = rng.uniform_int(1, 120);
    EXPECT_EQ(static_cast<std::int64_t>(optimal_schedule(a, cap).departures.size()),
              (n + cap - 1) / cap);
  }
}

// Simulated on its own arrivals nobody is left behind, and each wait is
// the assigned departure minus the arrival. Capacity is kept at or above the
// largest same-second stack, the one case the rule cannot split.
TEST(OptimalSchedule, NobodyIsLeftBehind) {
  Rng rng(2);
  for (int trial = 0; trial < 300; ++trial) {
    const bool ties = trial % 2 == 0;
    const auto arrivals = random_arrivals(rng, static_cast<int>(rng.uniform_int(1, 600)), 3600, ties);
    std::int64_t stack = 1;
    for (std::size_t k = 0, run = 0; k < arrivals.size(); ++k) {
      run = (k > 0 && arrivals[k] == arrivals[k - 1]) ? run + 1 : 1;
      stack = std::max(stack, static_cast<std::int64_t>(run));
    }
    const auto cap = rng.uniform_int(std::max<std::int64_t>(5, stack), 150);
    const Schedule s = optimal_schedule(arrivals, cap);
    EXPECT_TRUE(std::is_sorted(s.departures.begin(), s.departures.end()));
    EXPECT_EQ(std::adjacent_find(s.departures.begin(), s.departures.end()), s.departures.end());
    const auto in = single_station_input(s, arrivals, cap);
    const auto r = simulate_boarding(in);
    EXPECT_EQ(r.unserved, 0);
    for (const auto& row : r.cells) EXPECT_EQ(row[0].left_behind, 0) << "trial " << trial;
    for (const auto& rider : r.riders[0]) {
      EXPECT_EQ(rider.wait, s.departures[static_cast<std::size_t>(rider.train)] - rider.arrival);
    }
  }
}

TEST(Forecast, Examples) {
  const auto zero = forecast_arrivals(uniform_curve(), 0.0, 0);
  EXPECT_EQ(zero.total, 0);
  for (auto b : zero.bins) EXPECT_EQ(b, 0);

  std::vector<double> hot(24, 0.0);
  hot[9] = 1.0;
  const auto one = forecast_arrivals(curve_of(hot), 1000.0, 0);
  EXPECT_EQ(one.bins[9], 688);
  EXPECT_EQ(one.total, 688);

  const auto plain = forecast_arrivals(uniform_curve(), 2400.0, 0, {1.0, 1.0, 1.0});
  for (auto b : plain.bins) EXPECT_EQ(b, 100);
}

TEST(Forecast, RoundsHalfUpAndIsNearlyLinear) {
  std::vector<double> p(24, 0.0);
  p[0] = 0.5;
  p[1] = 0.5;
  const auto f = forecast_arrivals(curve_of(p), 5.0, 0, {1.0, 1.0, 1.0});
  EXPECT_EQ(f.bins[0], 3);  // 2.5 rounds up

  Rng rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> w(24);
    for (auto& x : w) x = rng.uniform();
    const double sum = std::accumulate(w.begin(), w.end(), 0.0);
    for (auto& x : w) x /= sum;
    const auto curve = curve_of(w);
    const double pred = 1000.0 + 9000.0 * rng.uniform();
    const auto single = forecast_arrivals(curve, pred, 0);
    const auto twice = forecast_arrivals(curve, 2.0 * pred, 0);
    for (std::size_t b = 0; b < 24; ++b) {
      EXPECT_LE(std::abs(twice.bins[b] - 2 * single.bins[b]), 1);
      EXPECT_GE(single.bins[b], 0);
    }
    EXPECT_EQ(single.total, std::accumulate(single.bins.begin(), single.bins.end(), std::int64_t{0}));
  }
}

TEST(ProposeSchedule, LightDemandGetsOneTrainAtWindowEnd) {
  const auto f = forecast_arrivals(uniform_curve(), 300.0, 10000);
  const auto s = propose_schedule(f, 707);
  ASSERT_EQ(s.departures.size(), 1u);
  EXPECT_EQ(s.departures[0], 10000 + 24 * 300);
}

TEST(ProposeSchedule, UniformDemandGivesEvenHeadways) {
  // 100 riders per 5 minutes; 250-rider trains should leave every 12.5 min.
  const auto f = forecast_arrivals(uniform_curve(), 2400.0, 0, {1.0, 1.0, 1.0});
  const auto s = propose_schedule(f, 250);
  ASSERT_GE(s.departures.size(), 3u);
  const auto h = headways(s);
  for (std::size_t k = 0; k + 1 < h.size(); ++k) EXPECT_NEAR(static_cast<double>(h[k]), 750.0, 3.0);
}

// Against its own forecast every train but the last leaves full.
TEST(ProposeSchedule, TrainsLeaveFullOnTheirOwnForecast) {
  Rng rng(4);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> w(24);
    for (auto& x : w) x = rng.uniform() < 0.2 ? 0.0 : rng.uniform();
    w[static_cast<std::size_t>(rng.uniform_int(0, 23))] += 0.1;
    const double sum = std::accumulate(w.begin(), w.end(), 0.0);
    for (auto& x : w) x /= sum;
    const auto f = forecast_arrivals(curve_of(w), 3000.0 + 6000.0 * rng.uniform(), 50000);
    const auto cap = rng.uniform_int(200, 900);
    const auto s = propose_schedule(f, cap);
    const auto arrivals = materialize(f);
    ASSERT_EQ(static_cast<std::int64_t>(arrivals.size()), f.total);
    const auto r = simulate_boarding(single_station_input(s, arrivals, cap));
    EXPECT_EQ(r.unserved, 0);
    for (std::size_t i = 0; i + 1 < r.cells.size(); ++i) {
      EXPECT_EQ(r.cells[i][0].boarded, cap) << "trial " << trial << " train " << i;
    }
  }
}

TEST(CompareSchedules, IdenticalSchedulesScoreTheSame) {
  Rng rng(5);
  const auto arrivals = random_arrivals(rng, 3000, 5400, false);
  Schedule s;
  for (Seconds t = 600; t <= 5400; t += 480) s.departures.push_back(t);
  const auto rep = compare_schedules(s, s, arrivals, 500);
  EXPECT_EQ(rep.actual.n_trains, rep.proposed.n_trains);
  EXPECT_EQ(rep.actual.wait_mean, rep.proposed.wait_mean);
  EXPECT_EQ(rep.actual.avg_left_behind, rep.proposed.avg_left_behind);
  EXPECT_EQ(rep.actual.max_trains_waited, rep.proposed.max_trains_waited);
}

TEST(CompareSchedules, ExactProposalLeavesNobodyBehind) {
  Rng rng(6);
  const auto arrivals = random_arrivals(rng, 4000, 5400, false);
  const auto proposed = optimal_schedule(arrivals, 707);
  const auto m = evaluate_schedule(proposed, arrivals, 707);
  EXPECT_EQ(m.avg_left_behind, 0.0);
  EXPECT_EQ(m.extra_trains, 0);
  EXPECT_EQ(m.max_trains_waited, 0);
}

// Realized demand 20% over the forecast strands some riders on the proposed
// schedule, but fewer than a sparser regular schedule does.
TEST(CompareSchedules, UnderForecastStillBeatsASparserSchedule) {
  std::vector<double> w{1, 1, 1, 1, 2, 2, 3, 4, 14, 16, 14, 11, 8, 6, 4, 3, 2, 2, 1, 1, 1, 1, 1, 1};
  const double sum = std::accumulate(w.begin(), w.end(), 0.0);
  for (auto& x : w) x /= sum;
  const auto curve = curve_of(w);
  const ForecastShares plain{1.0, 1.0, 1.0};
  const auto forecast = forecast_arrivals(curve, 6000.0, 0, plain);
  const auto realized_forecast = forecast_arrivals(curve, 7200.0, 0, plain);
  const auto realized = materialize(realized_forecast);
  const auto proposed = propose_schedule(forecast, 707);
  Schedule actual;
  for (Seconds t = 2400; t <= 7200; t += 900) actual.departures.push_back(t);
  const auto rep = compare_schedules(actual, proposed, realized, 707);
  EXPECT_GT(rep.proposed.avg_left_behind, 0.0);
  EXPECT_LE(rep.proposed.avg_left_behind, rep.actual.avg_left_behind);
}

TEST(EvaluateSchedule, AfterWindowTrainsServeTheRest) {
  const std::vector<Seconds> arrivals{0, 10, 20, 30, 40};
  Schedule s;
  s.departures = {25};
  const auto m = evaluate_schedule(s, arrivals, 2);
  EXPECT_EQ(m.n_trains, 1);
  // One train at 25 carries two; 10-minute trains at 625 and 1225 take the rest.
  EXPECT_EQ(m.extra_trains, 2);
  EXPECT_GT(m.avg_left_behind, 0.0);
}

}  // namespace
}  // namespace eventrail
