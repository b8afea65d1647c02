#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "eventrail/boardsim.hpp"
#include "eventrail/network.hpp"
#include "eventrail/taps.hpp"

namespace eventrail {

// Scenario document (JSON). Clock times are "HH:MM[:SS]" on the service date.
//   {
//     "format_version": 1,
//     "seed": 7,
//     "network": {...} | "relative/path.json",
//     "baseline": {"days": ["2018-09-03", ...],
//                  "rates": [{"station": "A", "per_bin": 2.5 | [96 numbers]}],
//                  "max_wait_seconds": 300},
//     "event": {"date": "2018-09-22", "station": "DOME", "heading": "EAST",
//               "attendance": 42000, "reference_attendance": 42000,
//               "arrivals": [{"station": "DOME",
//                             "segments": [{"from": "20:40", "to": "20:52", "count": 300}]}],
//               "destinations": [{"station": "X", "weight": 1.0}],
//               "west_share": 0.05, "west_destinations": ["Y"]},
//     "ground_truth": {"capacity": 707, "stations": ["VINE_CITY", "DOME"],
//                      "trains": [{"time": "20:52", "skips": ["VINE_CITY"]}],
//                      "after_headway": 600},
//     "exit_jitter": 0
//   }
// Segments are (from, to]. Upstream stop times are the event-station time
// minus the run time to the event station.
struct RateSpec {
  std::string station;
  std::vector<double> per_bin;  // 96 values (15-minute bins from 03:00)
};

struct SegmentSpec {
  Seconds from = 0;  // seconds after midnight of the event date
  Seconds to = 0;
  std::int64_t count = 0;
};

struct StationArrivals {
  std::string station;
  std::vector<SegmentSpec> segments;
};

struct DestinationSpec {
  std::string station;
  double weight = 1.0;
};

struct TrainSpec {
  Seconds time = 0;  // at the event station, seconds after midnight
  std::vector<std::string> skips;
};

struct ScenarioSpec {
  std::uint64_t seed = 0;
  NetworkModel network;
  std::vector<DayNumber> baseline_days;
  std::vector<RateSpec> rates;
  Seconds max_wait = 300;

  bool has_event = false;
  DayNumber event_date = 0;
  std::string event_station;
  Heading heading = Heading::East;
  double attendance = 0.0;
  double reference_attendance = 0.0;  // 0: counts used as given
  std::vector<StationArrivals> arrivals;
  std::vector<DestinationSpec> destinations;
  double west_share = 0.0;
  std::vector<std::string> west_destinations;

  std::int64_t capacity = 0;
  std::vector<std::string> truth_stations;  // travel order, event station last
  std::vector<TrainSpec> trains;
  Seconds after_headway = 600;
  Seconds exit_jitter = 0;  // exit times get a uniform offset in [-j, +j]

  // Throws BadField / BadNetwork for malformed documents.
  static ScenarioSpec from_json(const nlohmann::json& doc,
                                const std::filesystem::path& base_dir = {});
  static ScenarioSpec load(const std::filesystem::path& path);
};

// Poisson entries per 15-minute bin at each station, a uniformly chosen
// destination sharing a line, exit = entry + U[0, max_wait] + run time.
// The stream depends only on (seed, date).
std::vector<TapEvent> gen_baseline_day(const ScenarioSpec& spec, DayNumber date);

struct GroundTruth {
  SimInput input;    // stations, trains (with after-window trains), arrivals
  SimResult result;  // exact boarding outcome
  std::vector<std::vector<std::string>> cards;  // [station][rider] card ids
  std::int64_t event_riders = 0;
  std::map<std::string, std::int64_t> destination_counts;
  nlohmann::json to_json() const;
};

struct EventDay {
  std::vector<TapEvent> taps;
  GroundTruth truth;
};

// Baseline day plus event riders. Baseline riders entering a boarding station
// in the event window toward the event heading also ride the ground-truth
// trains. With attendance 0 the result equals gen_baseline_day.
EventDay gen_event_day(const ScenarioSpec& spec);

// Every baseline day followed by the event day, sorted by time then card.
struct Dataset {
  std::vector<TapEvent> taps;
  std::optional<GroundTruth> truth;
};
Dataset generate(const ScenarioSpec& spec);

}  // namespace eventrail
