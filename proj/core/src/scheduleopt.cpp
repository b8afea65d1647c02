#include "eventrail/scheduleopt.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include <nlohmann/json.hpp>

#include "eventrail/csv.hpp"
#include "eventrail/error.hpp"

namespace eventrail {

std::vector<Seconds> headways(const Schedule& schedule) {
  std::vector<Seconds> out;
  for (std::size_t i = 1; i < schedule.departures.size(); ++i) {
    out.push_back(schedule.departures[i] - schedule.departures[i - 1]);
  }
  return out;
}

namespace {
void push_increasing(std::vector<Seconds>& deps, Seconds t) {
  if (!deps.empty() && t <= deps.back()) t = deps.back() + 1;
  deps.push_back(t);
}
}  // namespace

Schedule optimal_schedule(std::span<const Seconds> sorted_arrivals, std::int64_t capacity) {
  if (sorted_arrivals.empty()) throw Error(ErrorCode::EmptyArrivals, "no arrivals to serve");
  if (capacity < 1) throw Error(ErrorCode::InvalidArgument, "capacity must be at least 1");
  const auto n = static_cast<std::size_t>(capacity);
  Schedule s;
  s.capacity = capacity;
  s.window_start = sorted_arrivals.front();
  s.window_end = sorted_arrivals.back();
  const auto begin = sorted_arrivals.begin();
  std::size_t next = 0;  // first rider not yet on a train
  while (next < sorted_arrivals.size()) {
    std::size_t last = std::min(next + n, sorted_arrivals.size()) - 1;
    const Seconds t = sorted_arrivals[last];
    if (last + 1 < sorted_arrivals.size() && sorted_arrivals[last + 1] == t) {
      // Riders sharing the n-th rider's second would overfill the train, so it
      // leaves with the rider just before them instead.
      const auto tie = std::lower_bound(begin + static_cast<std::ptrdiff_t>(next),
                                        begin + static_cast<std::ptrdiff_t>(last), t);
      if (tie != begin + static_cast<std::ptrdiff_t>(next)) {
        last = static_cast<std::size_t>(tie - begin) - 1;
      }
    }
    push_increasing(s.departures, sorted_arrivals[last]);
    next = last + 1;
  }
  return s;
}

ArrivalForecast forecast_arrivals(const ThroughputCurve& curve, double predicted_ridership,
                                  Seconds window_start, const ForecastShares& shares) {
  ArrivalForecast f;
  f.start = window_start;
  f.bin_width = curve.config.bin_width;
  f.predicted_ridership = predicted_ridership;
  f.shares = shares;
  const double scale =
      predicted_ridership * shares.east_share * shares.peak_share * shares.buffer;
  for (double p : curve.percent) {
    const auto v = static_cast<std::int64_t>(std::floor(p * scale + 0.5));
    f.bins.push_back(std::max<std::int64_t>(v, 0));
    f.total += f.bins.back();
  }
  return f;
}

std::vector<Seconds> materialize(const ArrivalForecast& forecast) {
  std::vector<Seconds> out;
  out.reserve(static_cast<std::size_t>(forecast.total));
  for (std::size_t k = 0; k < forecast.bins.size(); ++k) {
    const std::int64_t c = forecast.bins[k];
    const Seconds start = forecast.start + static_cast<Seconds>(k) * forecast.bin_width;
    for (std::int64_t j = 0; j < c; ++j) {
      out.push_back(start + static_cast<Seconds>(std::floor(
                                (static_cast<double>(j) + 0.5) * forecast.bin_width / c)));
    }
  }
  return out;
}

Schedule propose_schedule(const ArrivalForecast& forecast, std::int64_t capacity) {
  if (capacity < 1) throw Error(ErrorCode::InvalidArgument, "capacity must be at least 1");
  Schedule s;
  s.capacity = capacity;
  s.window_start = forecast.start;
  s.window_end = forecast.start + static_cast<Seconds>(forecast.bins.size()) * forecast.bin_width;
  const auto riders = materialize(forecast);
  const auto n = static_cast<std::size_t>(capacity);
  for (std::size_t k = n; k <= riders.size(); k += n) push_increasing(s.departures, riders[k - 1]);
  if (riders.size() % n != 0 || riders.empty()) push_increasing(s.departures, s.window_end);
  return s;
}

SimInput single_station_input(const Schedule& schedule, std::span<const Seconds> arrivals,
                              std::int64_t capacity) {
  SimInput input;
  input.stations = {"anchor"};
  for (Seconds t : schedule.departures) input.trains.push_back({{t}, capacity});
  input.arrivals.emplace_back(arrivals.begin(), arrivals.end());
  std::sort(input.arrivals[0].begin(), input.arrivals[0].end());
  return input;
}

ScheduleMetrics evaluate_schedule(const Schedule& schedule, std::span<const Seconds> arrivals,
                                  std::int64_t capacity, Seconds after_headway) {
  if (after_headway < 1) throw Error(ErrorCode::InvalidArgument, "after_headway must be >= 1");
  SimInput input = single_station_input(schedule, arrivals, capacity);
  const std::size_t own = input.trains.size();
  const Seconds last_arrival = input.arrivals[0].empty() ? 0 : input.arrivals[0].back();
  Seconds t = schedule.departures.empty() ? last_arrival : schedule.departures.back();
  while (t < last_arrival) {
    t += after_headway;
    input.trains.push_back({{t}, capacity});
  }
  SimResult result = simulate_boarding(input);
  // Each extra train serves at least min(capacity, backlog) riders, so this ends.
  while (result.unserved > 0 && capacity > 0) {
    t += after_headway;
    input.trains.push_back({{t}, capacity});
    result = simulate_boarding(input);
  }

  ScheduleMetrics m;
  m.n_trains = static_cast<int>(own);
  m.extra_trains = static_cast<int>(input.trains.size() - own);
  const WaitStats w = wait_times(result);
  m.wait_median = w.median / 60.0;
  m.wait_q3 = w.q3 / 60.0;
  m.wait_mean = w.mean / 60.0;
  m.wait_std = w.std / 60.0;
  double lb = 0.0;
  for (std::size_t i = 0; i < own; ++i) lb += result.cells[i][0].proportion_of_total;
  m.avg_left_behind = own > 0 ? lb / static_cast<double>(own) : 0.0;
  std::vector<Seconds> deps;
  for (const auto& tr : input.trains) deps.push_back(*tr.departures[0]);
  for (const auto& r : result.riders[0]) {
    if (r.train == kUnserved) continue;
    const auto first =
        static_cast<int>(std::lower_bound(deps.begin(), deps.end(), r.arrival) - deps.begin());
    m.max_trains_waited = std::max(m.max_trains_waited, r.train - first);
  }
  return m;
}

ComparisonReport compare_schedules(const Schedule& actual, const Schedule& proposed,
                                   std::span<const Seconds> realized_arrivals,
                                   std::int64_t capacity, Seconds after_headway) {
  return {evaluate_schedule(actual, realized_arrivals, capacity, after_headway),
          evaluate_schedule(proposed, realized_arrivals, capacity, after_headway)};
}

void write_schedule_csv(std::ostream& out, const Schedule& schedule, DayNumber service_day) {
  out << "train_index,departure\n";
  for (std::size_t i = 0; i < schedule.departures.size(); ++i) {
    out << i << ',' << format_clock(schedule.departures[i] - midnight_of(service_day)) << '\n';
  }
}

namespace {
std::string fixed(double v, int digits) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

nlohmann::json metrics_json(const ScheduleMetrics& m) {
  return {{"n_trains", m.n_trains},
          {"extra_trains", m.extra_trains},
          {"wait_median_min", m.wait_median},
          {"wait_q3_min", m.wait_q3},
          {"wait_mean_min", m.wait_mean},
          {"wait_std_min", m.wait_std},
          {"avg_pct_left_behind", 100.0 * m.avg_left_behind},
          {"max_trains_waited", m.max_trains_waited}};
}
}  // namespace

void write_comparison_csv(std::ostream& out, const ComparisonReport& report) {
  out << "schedule,n_trains,avg_wait_min,std_wait_min,median_wait_min,q3_wait_min,"
         "avg_pct_left_behind,max_trains_waited\n";
  auto row = [&](const char* name, const ScheduleMetrics& m) {
    const std::string fields[] = {name,
                                  std::to_string(m.n_trains),
                                  fixed(m.wait_mean, 2),
                                  fixed(m.wait_std, 2),
                                  fixed(m.wait_median, 2),
                                  fixed(m.wait_q3, 2),
                                  fixed(100.0 * m.avg_left_behind, 1),
                                  std::to_string(m.max_trains_waited)};
    csv::write_row(out, fields);
  };
  row("actual", report.actual);
  row("proposed", report.proposed);
}

nlohmann::json comparison_report(const ComparisonReport& report) {
  return {{"report_version", 1},
          {"actual", metrics_json(report.actual)},
          {"proposed", metrics_json(report.proposed)}};
}

}  // namespace eventrail
