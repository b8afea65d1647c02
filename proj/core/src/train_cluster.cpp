#include "eventrail/train_cluster.hpp"

#include <algorithm>

#include "eventrail/csv.hpp"
#include "eventrail/error.hpp"

namespace eventrail {
namespace {

std::vector<std::vector<std::size_t>> groups_of(const Clustering& c,
                                                std::span<const std::size_t> index) {
  std::vector<std::vector<std::size_t>> groups(static_cast<std::size_t>(c.n_clusters));
  for (std::size_t i = 0; i < c.labels.size(); ++i) {
    if (c.labels[i] != kNoise) groups[static_cast<std::size_t>(c.labels[i])].push_back(index[i]);
  }
  return groups;
}

}  // namespace

ClusterRidersResult cluster_riders(std::span<const AdjustedTrip> trips,
                                   const HdbscanParams& params, std::span<const int> refine) {
  ClusterRidersResult result;
  std::vector<std::int64_t> points;
  std::vector<std::size_t> index;
  points.reserve(trips.size());
  for (std::size_t i = 0; i < trips.size(); ++i) {
    points.push_back(trips[i].adjusted_departure);
    index.push_back(i);
  }
  result.first_pass = hdbscan_1d(points, params);
  auto groups = groups_of(result.first_pass, index);

  std::vector<std::vector<std::size_t>> final_groups;
  for (std::size_t g = 0; g < groups.size(); ++g) {
    if (std::find(refine.begin(), refine.end(), static_cast<int>(g)) == refine.end()) {
      final_groups.push_back(std::move(groups[g]));
      continue;
    }
    std::vector<std::int64_t> sub_points;
    for (std::size_t i : groups[g]) sub_points.push_back(trips[i].adjusted_departure);
    const Clustering sub = hdbscan_1d(sub_points, params);
    for (auto& sg : groups_of(sub, groups[g])) final_groups.push_back(std::move(sg));
  }
  for (int id : refine) {
    if (id < 0 || id >= result.first_pass.n_clusters) {
      throw Error(ErrorCode::InvalidArgument, "refine id " + std::to_string(id) +
                                                  " is not a first-pass cluster");
    }
  }

  std::size_t clustered = 0;
  for (auto& members : final_groups) {
    std::sort(members.begin(), members.end());
    TrainCluster train;
    train.departure_estimate = trips[members.front()].adjusted_departure;
    for (std::size_t i : members) {
      train.departure_estimate = std::max(train.departure_estimate, trips[i].adjusted_departure);
      ++train.per_origin_counts[trips[i].origin];
    }
    clustered += members.size();
    train.members = std::move(members);
    result.trains.push_back(std::move(train));
  }
  std::stable_sort(result.trains.begin(), result.trains.end(),
                   [](const TrainCluster& a, const TrainCluster& b) {
                     return a.departure_estimate < b.departure_estimate;
                   });
  for (std::size_t i = 0; i < result.trains.size(); ++i) {
    result.trains[i].train_index = static_cast<int>(i);
  }
  result.noise = trips.size() - clustered;
  return result;
}

RecoveredSchedule recover_schedule(std::span<const TrainCluster> clusters,
                                   std::span<const AdjustedTrip> trips, const NetworkModel& net,
                                   std::span<const std::string> candidate_stations,
                                   const std::string& event_station, Seconds slack) {
  RecoveredSchedule schedule;
  schedule.event_station = event_station;
  for (const auto& s : candidate_stations) {
    if (s != event_station) schedule.stations.push_back(s);
  }
  // Farther upstream boards first.
  std::stable_sort(schedule.stations.begin(), schedule.stations.end(),
                   [&](const std::string& a, const std::string& b) {
                     return net.travel_time(a, event_station) > net.travel_time(b, event_station);
                   });
  schedule.stations.push_back(event_station);

  for (const auto& cluster : clusters) {
    RecoveredTrain train;
    train.train_index = cluster.train_index;
    for (const auto& s : schedule.stations) {
      if (s == event_station) {
        train.departures[s] = cluster.departure_estimate;
        train.serves.insert(s);
        continue;
      }
      bool any = false;
      Seconds latest = 0;
      for (std::size_t i : cluster.members) {
        if (trips[i].origin != s) continue;
        latest = any ? std::max(latest, trips[i].entry_time) : trips[i].entry_time;
        any = true;
      }
      if (any) {
        train.departures[s] = latest;
        train.serves.insert(s);
      }
    }
    schedule.trains.push_back(std::move(train));
  }

  for (std::size_t t = 0; t + 1 < schedule.trains.size(); ++t) {
    for (const auto& s : schedule.stations) {
      if (!schedule.trains[t].serves.count(s) && schedule.trains[t + 1].serves.count(s)) {
        schedule.trains[t].skips.insert(s);
      }
    }
  }

  for (const auto& s : schedule.stations) {
    const RecoveredTrain* prev = nullptr;
    for (const auto& train : schedule.trains) {
      const auto it = train.departures.find(s);
      if (it == train.departures.end()) continue;
      if (prev && prev->departures.at(s) >= it->second) {
        schedule.warnings.push_back("departures at " + s + " not increasing between trains " +
                                    std::to_string(prev->train_index) + " and " +
                                    std::to_string(train.train_index));
      }
      prev = &train;
    }
  }
  for (const auto& train : schedule.trains) {
    for (std::size_t a = 0; a < schedule.stations.size(); ++a) {
      const auto ia = train.departures.find(schedule.stations[a]);
      if (ia == train.departures.end()) continue;
      for (std::size_t b = a + 1; b < schedule.stations.size(); ++b) {
        const auto ib = train.departures.find(schedule.stations[b]);
        if (ib == train.departures.end()) continue;
        const Seconds run = net.travel_time(schedule.stations[a], schedule.stations[b]);
        if (ib->second < ia->second + run - slack) {
          schedule.warnings.push_back("train " + std::to_string(train.train_index) + " reaches " +
                                      schedule.stations[b] + " too soon after " +
                                      schedule.stations[a]);
        }
        break;
      }
    }
  }
  return schedule;
}

void write_clusters_csv(std::ostream& out, std::span<const TrainCluster> clusters,
                        std::span<const AdjustedTrip> trips) {
  out << "trip_ref,train_index,departure_estimate\n";
  for (const auto& c : clusters) {
    for (std::size_t i : c.members) {
      const std::string fields[] = {std::to_string(trips[i].trip_ref),
                                    std::to_string(c.train_index),
                                    format_timestamp(c.departure_estimate)};
      csv::write_row(out, fields);
    }
  }
}

void write_schedule_csv(std::ostream& out, const RecoveredSchedule& schedule,
                        DayNumber service_day) {
  out << "train_index,station,departure\n";
  for (const auto& train : schedule.trains) {
    for (const auto& s : schedule.stations) {
      const auto it = train.departures.find(s);
      if (it == train.departures.end()) continue;
      const std::string fields[] = {std::to_string(train.train_index), s,
                                    format_clock(it->second - midnight_of(service_day))};
      csv::write_row(out, fields);
    }
  }
}

}  // namespace eventrail
