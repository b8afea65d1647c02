#include "eventrail/adjust.hpp"

#include <algorithm>

#include "eventrail/error.hpp"

namespace eventrail {

AdjustedTrip adjust_trip(const Trip& trip, std::size_t trip_ref, const NetworkModel& net,
                         const std::string& event_station) {
  if (!net.has_station(trip.entry_station) || !net.has_station(trip.exit_station)) {
    throw Error(ErrorCode::UnknownStation,
                "trip uses unknown station " + trip.entry_station + " / " + trip.exit_station);
  }
  if (!net.passes_through(trip.entry_station, event_station, trip.exit_station) ||
      trip.entry_station == trip.exit_station) {
    throw Error(ErrorCode::NotOnEventPath, trip.entry_station + " -> " + trip.exit_station +
                                               " does not pass " + event_station);
  }
  AdjustedTrip out;
  out.trip_ref = trip_ref;
  out.event_station = event_station;
  out.origin = trip.entry_station;
  out.destination = trip.exit_station;
  out.entry_time = trip.entry_time;
  out.direction = net.heading(trip.entry_station, trip.exit_station);
  out.adjusted_arrival = trip.entry_time + net.travel_time(trip.entry_station, event_station);
  out.adjusted_departure = trip.exit_time - net.travel_time(event_station, trip.exit_station);
  return out;
}

AdjustResult adjust_trips(std::span<const Trip> trips, const NetworkModel& net,
                          const std::string& event_station, const AdjustFilter& filter) {
  AdjustResult result;
  for (std::size_t i = 0; i < trips.size(); ++i) {
    const Trip& trip = trips[i];
    if (trip.flags != 0) {
      ++result.flagged;
      continue;
    }
    if (!filter.origins.empty() &&
        std::find(filter.origins.begin(), filter.origins.end(), trip.entry_station) ==
            filter.origins.end()) {
      ++result.filtered;
      continue;
    }
    if ((filter.entry_from && trip.entry_time < *filter.entry_from) ||
        (filter.entry_to && trip.entry_time > *filter.entry_to)) {
      ++result.filtered;
      continue;
    }
    if (!net.has_station(trip.entry_station) || !net.has_station(trip.exit_station) ||
        !net.passes_through(trip.entry_station, event_station, trip.exit_station)) {
      ++result.off_path;
      continue;
    }
    if (filter.heading && net.heading(trip.entry_station, trip.exit_station) != *filter.heading) {
      ++result.filtered;
      continue;
    }
    AdjustedTrip adjusted = adjust_trip(trip, i, net, event_station);
    const Seconds wait = adjusted.wait();
    if (wait < 0 || wait > filter.max_wait) {
      ++result.bad_wait;
      continue;
    }
    result.trips.push_back(std::move(adjusted));
  }
  return result;
}

}  // namespace eventrail
