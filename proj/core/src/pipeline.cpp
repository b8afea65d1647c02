#include "eventrail/pipeline.hpp"

namespace eventrail {

PipelineResult run_pipeline(std::span<const Trip> trips, const NetworkModel& net,
                            const PipelineConfig& config) {
  PipelineResult out;
  AdjustFilter filter;
  filter.origins = config.boarding_stations;
  filter.heading = config.heading;
  filter.entry_from = config.entry_from;
  filter.entry_to = config.entry_to;
  filter.max_wait = config.max_wait;
  out.adjusted = adjust_trips(trips, net, config.event_station, filter);
  out.clusters = cluster_riders(out.adjusted.trips, config.hdbscan, config.refine);
  std::vector<std::string> candidates = config.boarding_stations;
  if (candidates.empty()) candidates.push_back(config.event_station);
  out.schedule = recover_schedule(out.clusters.trains, out.adjusted.trips, net, candidates,
                                  config.event_station);
  out.observation =
      build_observation(out.schedule, out.clusters.trains, out.adjusted.trips, config.kind);
  return out;
}

}  // namespace eventrail
