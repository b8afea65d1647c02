#pragma once

#include <cstddef>
#include <map>
#include <ostream>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "eventrail/adjust.hpp"
#include "eventrail/hdbscan.hpp"
#include "eventrail/network.hpp"

namespace eventrail {

struct TrainCluster {
  int train_index = 0;
  Seconds departure_estimate = 0;     // max adjusted_departure over members
  std::vector<std::size_t> members;   // indices into the clustered trip list
  std::map<std::string, std::size_t> per_origin_counts;
};

struct ClusterRidersResult {
  std::vector<TrainCluster> trains;
  Clustering first_pass;
  std::size_t noise = 0;  // riders in no final cluster
};

// First pass on adjusted departures; each id in `refine` (a first-pass label)
// is re-clustered on its own members and replaced by its sub-clusters.
// Trains are numbered in order of departure_estimate.
ClusterRidersResult cluster_riders(std::span<const AdjustedTrip> trips,
                                   const HdbscanParams& params = {},
                                   std::span<const int> refine = {});

struct RecoveredTrain {
  int train_index = 0;
  std::map<std::string, Seconds> departures;  // only for served stations
  std::set<std::string> serves;
  std::set<std::string> skips;
};

struct RecoveredSchedule {
  std::vector<std::string> stations;  // travel order, event station last
  std::string event_station;
  std::vector<RecoveredTrain> trains;
  std::vector<std::string> warnings;
};

// Upstream departures are the latest member entry at that station. A train
// with no riders from a station skips it when the following train has some;
// otherwise the stop is left undetermined. Monotonicity and run-time checks
// only produce warnings.
RecoveredSchedule recover_schedule(std::span<const TrainCluster> clusters,
                                   std::span<const AdjustedTrip> trips, const NetworkModel& net,
                                   std::span<const std::string> candidate_stations,
                                   const std::string& event_station,
                                   Seconds slack = 60);

// trip_ref,train_index,departure_estimate
void write_clusters_csv(std::ostream& out, std::span<const TrainCluster> clusters,
                        std::span<const AdjustedTrip> trips);
// train_index,station,departure (clock time of the service day, HH:MM:SS)
void write_schedule_csv(std::ostream& out, const RecoveredSchedule& schedule,
                        DayNumber service_day);

}  // namespace eventrail
