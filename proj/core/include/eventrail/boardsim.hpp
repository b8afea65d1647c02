#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "eventrail/civil_time.hpp"

namespace eventrail {

struct ScheduledTrain {
  // One entry per SimInput station; nullopt means the train does not stop.
  std::vector<std::optional<Seconds>> departures;
  std::int64_t capacity = 0;
};

struct SimInput {
  std::vector<std::string> stations;          // travel order
  std::vector<ScheduledTrain> trains;         // departure order
  std::vector<std::vector<Seconds>> arrivals;  // per station, ascending
};

struct SimCell {
  bool served = false;
  std::int64_t new_demand = 0;    // d: arrivals in (previous stop, this stop]
  std::int64_t total_demand = 0;  // r = l_prev + d
  std::int64_t boarded = 0;
  std::int64_t left_behind = 0;   // l = max(r - C, 0)
  std::int64_t capacity_before = 0;
  std::int64_t remaining_capacity = 0;  // max(0, C - r)
  double proportion_of_total = 0.0;     // l / r
  double proportion_of_new = 0.0;       // min(l, d) / d

  friend bool operator==(const SimCell&, const SimCell&) = default;
};

inline constexpr int kUnserved = -1;

struct RiderOutcome {
  Seconds arrival = 0;
  int train = kUnserved;
  Seconds wait = 0;  // 0 for unserved riders

  friend bool operator==(const RiderOutcome&, const RiderOutcome&) = default;
};

struct SimResult {
  std::vector<std::vector<SimCell>> cells;       // [train][station]
  std::vector<std::vector<RiderOutcome>> riders;  // [station][rider], arrival order
  std::int64_t unserved = 0;
};

// Throws InvalidSchedule when stop times do not strictly increase across
// trains at a station (or the shapes disagree), NegativeCapacity for C < 0,
// InvalidArgument for unsorted arrivals.
void validate(const SimInput& input);

// Trains are processed in order and, within a train, stations in travel
// order, so upstream riders take capacity first. Queues are FIFO and a rider
// arriving exactly at a departure catches it.
SimResult simulate_boarding(const SimInput& input);

// Same cells as simulate_boarding without per-rider bookkeeping.
std::vector<std::vector<SimCell>> simulate_cells(const SimInput& input);

// Waits of served riders. When `window` is set only riders whose arrival plus
// the per-station offset falls in [from, to) are included.
struct WaitWindow {
  Seconds from = 0;
  Seconds to = 0;
  std::vector<Seconds> station_offset;  // empty: all zero
};

struct WaitStats {
  double median = 0.0;
  double q3 = 0.0;
  double mean = 0.0;
  double std = 0.0;
  std::size_t count = 0;
  std::size_t unserved = 0;
  std::vector<double> series;  // seconds
};

WaitStats wait_times(const SimResult& result, const std::optional<WaitWindow>& window = {});

struct LeftBehindRow {
  int train = 0;
  std::string station;
  std::int64_t new_demand = 0;
  std::int64_t total_demand = 0;
  std::int64_t left_behind = 0;
  double proportion_of_total = 0.0;
  double proportion_of_new = 0.0;
};

// Served cells with r > 0.
std::vector<LeftBehindRow> left_behind_table(const SimInput& input, const SimResult& result);

void write_left_behind_csv(std::ostream& out, std::span<const LeftBehindRow> rows);
void write_riders_csv(std::ostream& out, const SimInput& input, const SimResult& result);
nlohmann::json simulation_report(const SimInput& input, const SimResult& result);

}  // namespace eventrail
