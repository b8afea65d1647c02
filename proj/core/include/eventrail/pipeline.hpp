#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "eventrail/adjust.hpp"
#include "eventrail/capacity.hpp"
#include "eventrail/hdbscan.hpp"
#include "eventrail/network.hpp"
#include "eventrail/train_cluster.hpp"
#include "eventrail/trips.hpp"

namespace eventrail {

struct PipelineConfig {
  std::string event_station;
  std::vector<std::string> boarding_stations;  // also the candidate stops
  Heading heading = Heading::East;
  std::optional<Seconds> entry_from;
  std::optional<Seconds> entry_to;
  Seconds max_wait = 45 * 60;
  HdbscanParams hdbscan;
  std::vector<int> refine;
  ProportionKind kind = ProportionKind::OfNew;
};

struct PipelineResult {
  AdjustResult adjusted;
  ClusterRidersResult clusters;
  RecoveredSchedule schedule;
  CapacityObservation observation;
};

// trips -> adjust -> cluster -> recover schedule -> capacity observation.
PipelineResult run_pipeline(std::span<const Trip> trips, const NetworkModel& net,
                            const PipelineConfig& config);

}  // namespace eventrail
