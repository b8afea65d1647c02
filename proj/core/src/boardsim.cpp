#include "eventrail/boardsim.hpp"

#include <algorithm>
#include <cstdio>

#include <nlohmann/json.hpp>

#include "eventrail/csv.hpp"
#include "eventrail/error.hpp"
#include "eventrail/stats.hpp"

namespace eventrail {

void validate(const SimInput& input) {
  const std::size_t n_stations = input.stations.size();
  if (input.arrivals.size() != n_stations) {
    throw Error(ErrorCode::InvalidSchedule, "arrivals must have one list per station");
  }
  for (std::size_t s = 0; s < n_stations; ++s) {
    if (!std::is_sorted(input.arrivals[s].begin(), input.arrivals[s].end())) {
      throw Error(ErrorCode::InvalidArgument, "arrivals at " + input.stations[s] + " not sorted");
    }
  }
  std::vector<std::optional<Seconds>> last(n_stations);
  for (std::size_t i = 0; i < input.trains.size(); ++i) {
    const auto& train = input.trains[i];
    if (train.capacity < 0) {
      throw Error(ErrorCode::NegativeCapacity, "train " + std::to_string(i) + " capacity < 0");
    }
    if (train.departures.size() != n_stations) {
      throw Error(ErrorCode::InvalidSchedule,
                  "train " + std::to_string(i) + " has the wrong number of stops");
    }
    for (std::size_t s = 0; s < n_stations; ++s) {
      if (!train.departures[s]) continue;
      if (last[s] && *train.departures[s] <= *last[s]) {
        throw Error(ErrorCode::InvalidSchedule, "departures at " + input.stations[s] +
                                                    " not strictly increasing at train " +
                                                    std::to_string(i));
      }
      last[s] = train.departures[s];
    }
  }
}

namespace {

void fill_cell(SimCell& cell, std::int64_t left_prev, std::int64_t d, std::int64_t cap) {
  cell.served = true;
  cell.new_demand = d;
  cell.total_demand = left_prev + d;
  cell.capacity_before = cap;
  cell.boarded = std::min(cell.total_demand, cap);
  cell.left_behind = cell.total_demand - cell.boarded;
  cell.remaining_capacity = cap - cell.boarded;
  cell.proportion_of_total =
      cell.total_demand > 0 ? static_cast<double>(cell.left_behind) / cell.total_demand : 0.0;
  cell.proportion_of_new =
      d > 0 ? static_cast<double>(std::min(cell.left_behind, d)) / static_cast<double>(d) : 0.0;
}

// Shared walk; `on_board(station, first_queue_index, count, train)` sees
// every boarding run in FIFO order.
template <typename OnBoard>
std::vector<std::vector<SimCell>> run(const SimInput& input, OnBoard&& on_board) {
  validate(input);
  const std::size_t n_stations = input.stations.size();
  std::vector<std::vector<SimCell>> cells(input.trains.size(),
                                          std::vector<SimCell>(n_stations));
  std::vector<std::size_t> head(n_stations, 0);     // first rider still waiting
  std::vector<std::size_t> arrived(n_stations, 0);  // riders arrived so far
  for (std::size_t i = 0; i < input.trains.size(); ++i) {
    std::int64_t cap = input.trains[i].capacity;
    for (std::size_t s = 0; s < n_stations; ++s) {
      SimCell& cell = cells[i][s];
      const auto& dep = input.trains[i].departures[s];
      if (!dep) {
        cell.capacity_before = cap;
        cell.remaining_capacity = cap;
        continue;
      }
      const auto& arr = input.arrivals[s];
      const std::size_t upto = static_cast<std::size_t>(
          std::upper_bound(arr.begin(), arr.end(), *dep) - arr.begin());
      const auto d = static_cast<std::int64_t>(upto - arrived[s]);
      const auto left_prev = static_cast<std::int64_t>(arrived[s] - head[s]);
      fill_cell(cell, left_prev, d, cap);
      on_board(s, head[s], static_cast<std::size_t>(cell.boarded), i);
      head[s] += static_cast<std::size_t>(cell.boarded);
      arrived[s] = upto;
      cap = cell.remaining_capacity;
    }
  }
  return cells;
}

}  // namespace

SimResult simulate_boarding(const SimInput& input) {
  SimResult result;
  result.riders.resize(input.stations.size());
  for (std::size_t s = 0; s < input.arrivals.size() && s < input.stations.size(); ++s) {
    for (Seconds a : input.arrivals[s]) result.riders[s].push_back({a, kUnserved, 0});
  }
  result.cells = run(input, [&](std::size_t s, std::size_t first, std::size_t count,
                                std::size_t train) {
    const Seconds dep = *input.trains[train].departures[s];
    for (std::size_t k = first; k < first + count; ++k) {
      auto& rider = result.riders[s][k];
      rider.train = static_cast<int>(train);
      rider.wait = dep - rider.arrival;
    }
  });
  for (const auto& station : result.riders) {
    for (const auto& r : station) {
      if (r.train == kUnserved) ++result.unserved;
    }
  }
  return result;
}

std::vector<std::vector<SimCell>> simulate_cells(const SimInput& input) {
  return run(input, [](std::size_t, std::size_t, std::size_t, std::size_t) {});
}

WaitStats wait_times(const SimResult& result, const std::optional<WaitWindow>& window) {
  WaitStats stats;
  for (std::size_t s = 0; s < result.riders.size(); ++s) {
    const Seconds offset =
        window && s < window->station_offset.size() ? window->station_offset[s] : 0;
    for (const auto& r : result.riders[s]) {
      if (window && (r.arrival + offset < window->from || r.arrival + offset >= window->to)) {
        continue;
      }
      if (r.train == kUnserved) {
        ++stats.unserved;
        continue;
      }
      stats.series.push_back(static_cast<double>(r.wait));
    }
  }
  stats.count = stats.series.size();
  if (stats.series.empty()) return stats;
  std::vector<double> sorted = stats.series;
  std::sort(sorted.begin(), sorted.end());
  stats.median = stats::quantile_sorted(sorted, 0.5);
  stats.q3 = stats::quantile_sorted(sorted, 0.75);
  stats.mean = stats::mean(sorted);
  stats.std = stats::stddev(sorted);
  return stats;
}

std::vector<LeftBehindRow> left_behind_table(const SimInput& input, const SimResult& result) {
  std::vector<LeftBehindRow> rows;
  for (std::size_t i = 0; i < result.cells.size(); ++i) {
    for (std::size_t s = 0; s < result.cells[i].size(); ++s) {
      const SimCell& c = result.cells[i][s];
      if (!c.served || c.total_demand == 0) continue;
      rows.push_back({static_cast<int>(i), input.stations[s], c.new_demand, c.total_demand,
                      c.left_behind, c.proportion_of_total, c.proportion_of_new});
    }
  }
  return rows;
}

namespace {
std::string fixed(double v, int digits) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}
}  // namespace

void write_left_behind_csv(std::ostream& out, std::span<const LeftBehindRow> rows) {
  out << "train,station,new_demand,total_demand,left_behind,proportion_of_total,"
         "proportion_of_new\n";
  for (const auto& r : rows) {
    const std::string fields[] = {std::to_string(r.train),      r.station,
                                  std::to_string(r.new_demand), std::to_string(r.total_demand),
                                  std::to_string(r.left_behind), fixed(r.proportion_of_total, 4),
                                  fixed(r.proportion_of_new, 4)};
    csv::write_row(out, fields);
  }
}

void write_riders_csv(std::ostream& out, const SimInput& input, const SimResult& result) {
  out << "station,arrival,train,wait_seconds\n";
  for (std::size_t s = 0; s < result.riders.size(); ++s) {
    for (const auto& r : result.riders[s]) {
      const std::string fields[] = {input.stations[s], format_timestamp(r.arrival),
                                    r.train == kUnserved ? "UNSERVED" : std::to_string(r.train),
                                    r.train == kUnserved ? "" : std::to_string(r.wait)};
      csv::write_row(out, fields);
    }
  }
}

nlohmann::json simulation_report(const SimInput& input, const SimResult& result) {
  const WaitStats w = wait_times(result);
  nlohmann::json doc;
  doc["report_version"] = 1;
  doc["stations"] = input.stations;
  doc["trains"] = input.trains.size();
  doc["riders"] = w.count + w.unserved;
  doc["unserved"] = result.unserved;
  doc["wait_minutes"] = {{"median", w.median / 60.0},
                         {"q3", w.q3 / 60.0},
                         {"mean", w.mean / 60.0},
                         {"std", w.std / 60.0}};
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : left_behind_table(input, result)) {
    rows.push_back({{"train", r.train},
                    {"station", r.station},
                    {"new_demand", r.new_demand},
                    {"total_demand", r.total_demand},
                    {"left_behind", r.left_behind},
                    {"proportion_of_total", r.proportion_of_total},
                    {"proportion_of_new", r.proportion_of_new}});
  }
  doc["left_behind"] = std::move(rows);
  return doc;
}

}  // namespace eventrail
