#pragma once

#include <cstddef>
#include <cstdint>
#include <ostream>
#include <span>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "eventrail/boardsim.hpp"
#include "eventrail/signatures.hpp"

namespace eventrail {

// Departures at the anchor station.
struct Schedule {
  std::vector<Seconds> departures;
  std::int64_t capacity = 0;
  Seconds window_start = 0;
  Seconds window_end = 0;
};

std::vector<Seconds> headways(const Schedule& schedule);

// Train i departs with the (i*n)-th arrival; a last train takes any
// remainder at the final arrival. When riders share the n-th rider's second
// the train leaves with the last rider before that second, so nobody who
// catches it is left behind; only more than n riders in one second can
// overfill a train. A departure that would repeat the previous second is
// pushed one second later. Throws EmptyArrivals.
Schedule optimal_schedule(std::span<const Seconds> sorted_arrivals, std::int64_t capacity);

struct ForecastShares {
  double east_share = 0.92;
  double peak_share = 0.68;
  double buffer = 1.10;
};

struct ArrivalForecast {
  Seconds start = 0;  // absolute start of bin 0
  Seconds bin_width = 300;
  std::vector<std::int64_t> bins;
  std::int64_t total = 0;
  double predicted_ridership = 0.0;
  ForecastShares shares;
};

// bin_k = round_half_up(percent_k * prediction * east * peak * buffer).
ArrivalForecast forecast_arrivals(const ThroughputCurve& curve, double predicted_ridership,
                                  Seconds window_start, const ForecastShares& shares = {});

// Rider j of a bin holding c riders arrives at start + floor((j + 0.5) * w / c).
std::vector<Seconds> materialize(const ArrivalForecast& forecast);

// Train k leaves as the (k * capacity)-th forecast rider arrives; a sweeper
// leaves at the window end when riders remain.
Schedule propose_schedule(const ArrivalForecast& forecast, std::int64_t capacity);

struct ScheduleMetrics {
  int n_trains = 0;           // trains of the schedule itself
  int extra_trains = 0;       // regular-headway trains added after it
  double wait_median = 0.0;   // minutes
  double wait_q3 = 0.0;
  double wait_mean = 0.0;
  double wait_std = 0.0;
  double avg_left_behind = 0.0;  // mean proportion of total demand, schedule trains
  int max_trains_waited = 0;     // departures a rider watched leave without them
};

struct ComparisonReport {
  ScheduleMetrics actual;
  ScheduleMetrics proposed;
};

// Both schedules run against the same arrivals. After its last departure a
// schedule is continued every `after_headway` until every rider is served.
ScheduleMetrics evaluate_schedule(const Schedule& schedule, std::span<const Seconds> arrivals,
                                  std::int64_t capacity, Seconds after_headway = 600);
ComparisonReport compare_schedules(const Schedule& actual, const Schedule& proposed,
                                   std::span<const Seconds> realized_arrivals,
                                   std::int64_t capacity, Seconds after_headway = 600);

// Single-station simulation input for a schedule.
SimInput single_station_input(const Schedule& schedule, std::span<const Seconds> arrivals,
                              std::int64_t capacity);

// train_index,departure (clock time of `service_day`)
void write_schedule_csv(std::ostream& out, const Schedule& schedule, DayNumber service_day);
void write_comparison_csv(std::ostream& out, const ComparisonReport& report);
nlohmann::json comparison_report(const ComparisonReport& report);

}  // namespace eventrail
