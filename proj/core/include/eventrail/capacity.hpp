#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "eventrail/adjust.hpp"
#include "eventrail/boardsim.hpp"
#include "eventrail/train_cluster.hpp"

namespace eventrail {

// Throws LengthMismatch.
double mae_loss(std::span<const double> observed, std::span<const double> simulated);

enum class ProportionKind { OfTotal, OfNew };

const char* to_string(ProportionKind k);
ProportionKind parse_proportion_kind(std::string_view text);

// A recovered schedule with its riders, ready for re-simulation. Train
// capacities in `input` are placeholders.
struct CapacityObservation {
  SimInput input;
  // observed[s][i]: left-behind proportion at station s for train i (only
  // meaningful where the train stops).
  std::vector<std::vector<double>> observed;
  std::vector<std::size_t> loss_stations;  // station indices entering the loss
  ProportionKind kind = ProportionKind::OfNew;
};

// Riders are the clustered trips; a rider from station s arriving in
// (T_{i-1}, T_i] is left behind by train i when assigned to a later train.
CapacityObservation build_observation(const RecoveredSchedule& schedule,
                                      std::span<const TrainCluster> clusters,
                                      std::span<const AdjustedTrip> trips,
                                      ProportionKind kind = ProportionKind::OfNew);

// Pairs (observed, simulated) for every loss station and every stopping train.
struct ProportionPairs {
  std::vector<double> observed;
  std::vector<double> simulated;
};
ProportionPairs proportion_pairs(const CapacityObservation& obs,
                                 const std::vector<std::vector<SimCell>>& cells);

struct CapacityGrid {
  std::int64_t lo = 300;
  std::int64_t hi = 1200;
  std::int64_t step = 1;

  std::vector<std::int64_t> values() const;
};

struct CapacityEstimate {
  std::int64_t best_capacity = 0;
  double best_loss = 0.0;
  std::map<std::int64_t, double> loss_curve;
  std::vector<double> observed;
  std::vector<double> simulated_at_best;
};

// Uniform capacity across trains; ties go to the smallest capacity.
CapacityEstimate estimate_capacity(const CapacityObservation& obs,
                                   std::span<const std::int64_t> candidates);
CapacityEstimate estimate_capacity(const CapacityObservation& obs, const CapacityGrid& grid = {});

struct StabilityReport {
  std::vector<std::int64_t> estimates;  // one per run
  double q1 = 0.0;
  double median = 0.0;
  double q3 = 0.0;
  double mean = 0.0;
  int runs = 0;
  std::uint64_t seed = 0;
  double noise_scale = 1.0;
};

// Run r shifts every train later by round(|z| * 60 * noise_scale) seconds,
// z standard normal from the stream (seed, r), then re-estimates. Shifted
// stops that would not stay strictly increasing are pushed one second past
// the previous train.
StabilityReport stability_analysis(const CapacityObservation& obs, const CapacityGrid& grid,
                                   int runs, std::uint64_t seed, double noise_scale = 1.0);

void write_loss_curve_csv(std::ostream& out, const CapacityEstimate& estimate);
void write_stability_csv(std::ostream& out, const StabilityReport& report);
nlohmann::json capacity_report(const CapacityEstimate& estimate);
nlohmann::json stability_report(const StabilityReport& report);

}  // namespace eventrail
