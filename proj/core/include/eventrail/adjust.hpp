#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "eventrail/network.hpp"
#include "eventrail/trips.hpp"

namespace eventrail {

// A trip re-timed to the event station: when the rider reached it and when
// their train left it.
struct AdjustedTrip {
  std::size_t trip_ref = 0;  // index into the source trip list
  std::string event_station;
  Seconds adjusted_arrival = 0;
  Seconds adjusted_departure = 0;
  std::string origin;
  std::string destination;
  Heading direction = Heading::East;
  Seconds entry_time = 0;  // raw entry at the origin

  Seconds wait() const { return adjusted_departure - adjusted_arrival; }
};

// departure = exit - tt(event, dest); arrival = entry + tt(origin, event).
// Throws NotOnEventPath when no line carries origin -> event -> dest.
AdjustedTrip adjust_trip(const Trip& trip, std::size_t trip_ref, const NetworkModel& net,
                         const std::string& event_station);

struct AdjustFilter {
  std::vector<std::string> origins;  // empty: any origin on the path
  std::optional<Heading> heading;
  std::optional<Seconds> entry_from;  // inclusive, raw entry time
  std::optional<Seconds> entry_to;    // inclusive
  Seconds max_wait = 45 * 60;
};

struct AdjustResult {
  std::vector<AdjustedTrip> trips;
  std::size_t filtered = 0;       // outside origin / heading / window
  std::size_t off_path = 0;       // event station not between origin and dest
  std::size_t bad_wait = 0;       // wait < 0 or wait > max_wait
  std::size_t flagged = 0;        // forced entry/exit or self loop
};

// Applies the filter, adjusts every surviving trip and drops implausible
// waits. Trips with chaining flags are skipped since their times are synthetic.
AdjustResult adjust_trips(std::span<const Trip> trips, const NetworkModel& net,
                          const std::string& event_station, const AdjustFilter& filter = {});

}  // namespace eventrail
