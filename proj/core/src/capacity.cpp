#include "eventrail/capacity.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include <nlohmann/json.hpp>

#include "eventrail/error.hpp"
#include "eventrail/rng.hpp"
#include "eventrail/stats.hpp"

namespace eventrail {

double mae_loss(std::span<const double> observed, std::span<const double> simulated) {
  if (observed.size() != simulated.size()) {
    throw Error(ErrorCode::LengthMismatch, std::to_string(observed.size()) + " observed vs " +
                                               std::to_string(simulated.size()) + " simulated");
  }
  if (observed.empty()) return 0.0;
  double sum = 0.0;
  for (std::size_t i = 0; i < observed.size(); ++i) sum += std::abs(observed[i] - simulated[i]);
  return sum / static_cast<double>(observed.size());
}

const char* to_string(ProportionKind k) { return k == ProportionKind::OfNew ? "of_new" : "of_total"; }

ProportionKind parse_proportion_kind(std::string_view text) {
  if (text == "of_new" || text == "new") return ProportionKind::OfNew;
  if (text == "of_total" || text == "total") return ProportionKind::OfTotal;
  throw Error(ErrorCode::InvalidArgument, "unknown proportion kind '" + std::string(text) + "'");
}

CapacityObservation build_observation(const RecoveredSchedule& schedule,
                                      std::span<const TrainCluster> clusters,
                                      std::span<const AdjustedTrip> trips, ProportionKind kind) {
  CapacityObservation obs;
  obs.kind = kind;
  obs.input.stations = schedule.stations;
  const std::size_t n_st = schedule.stations.size();
  const std::size_t n_tr = schedule.trains.size();
  for (const auto& t : schedule.trains) {
    ScheduledTrain st;
    for (const auto& s : schedule.stations) {
      const auto it = t.departures.find(s);
      st.departures.push_back(it == t.departures.end() ? std::nullopt
                                                       : std::optional<Seconds>(it->second));
    }
    obs.input.trains.push_back(std::move(st));
  }

  // Riders per station with the train they took.
  std::vector<std::vector<std::pair<Seconds, int>>> riders(n_st);
  for (std::size_t c = 0; c < clusters.size(); ++c) {
    for (std::size_t m : clusters[c].members) {
      const auto& trip = trips[m];
      const auto pos = std::find(schedule.stations.begin(), schedule.stations.end(), trip.origin);
      if (pos == schedule.stations.end()) continue;
      riders[static_cast<std::size_t>(pos - schedule.stations.begin())].emplace_back(
          trip.entry_time, static_cast<int>(c));
    }
  }
  obs.input.arrivals.resize(n_st);
  obs.observed.assign(n_st, std::vector<double>(n_tr, 0.0));
  for (std::size_t s = 0; s < n_st; ++s) {
    std::sort(riders[s].begin(), riders[s].end());
    for (const auto& r : riders[s]) obs.input.arrivals[s].push_back(r.first);
    std::optional<Seconds> prev;
    for (std::size_t i = 0; i < n_tr; ++i) {
      const auto& dep = obs.input.trains[i].departures[s];
      if (!dep) continue;
      std::int64_t d = 0, l_new = 0, r = 0, l_total = 0;
      for (const auto& [arrival, train] : riders[s]) {
        if (arrival > *dep) break;
        const bool new_here = !prev || arrival > *prev;
        if (train >= static_cast<int>(i)) {
          ++r;
          if (train > static_cast<int>(i)) ++l_total;
        }
        if (new_here) {
          ++d;
          if (train > static_cast<int>(i)) ++l_new;
        }
      }
      obs.observed[s][i] = kind == ProportionKind::OfNew
                               ? (d > 0 ? static_cast<double>(l_new) / d : 0.0)
                               : (r > 0 ? static_cast<double>(l_total) / r : 0.0);
      prev = dep;
    }
  }
  obs.loss_stations = {n_st - 1};
  return obs;
}

ProportionPairs proportion_pairs(const CapacityObservation& obs,
                                 const std::vector<std::vector<SimCell>>& cells) {
  ProportionPairs pairs;
  for (std::size_t s : obs.loss_stations) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      const SimCell& c = cells[i][s];
      if (!c.served) continue;
      pairs.observed.push_back(obs.observed[s][i]);
      pairs.simulated.push_back(obs.kind == ProportionKind::OfNew ? c.proportion_of_new
                                                                  : c.proportion_of_total);
    }
  }
  return pairs;
}

std::vector<std::int64_t> CapacityGrid::values() const {
  if (step < 1 || lo > hi) {
    throw Error(ErrorCode::InvalidArgument, "capacity grid needs lo <= hi and step >= 1");
  }
  std::vector<std::int64_t> out;
  for (std::int64_t c = lo; c <= hi; c += step) out.push_back(c);
  return out;
}

namespace {

CapacityEstimate estimate_on(const CapacityObservation& obs, SimInput input,
                             std::span<const std::int64_t> candidates) {
  if (candidates.empty()) throw Error(ErrorCode::InvalidArgument, "empty capacity grid");
  CapacityEstimate est;
  est.best_loss = std::numeric_limits<double>::infinity();
  for (std::int64_t c : candidates) {
    for (auto& t : input.trains) t.capacity = c;
    const auto pairs = proportion_pairs(obs, simulate_cells(input));
    const double loss = mae_loss(pairs.observed, pairs.simulated);
    est.loss_curve[c] = loss;
    if (loss < est.best_loss || (loss == est.best_loss && c < est.best_capacity)) {
      est.best_loss = loss;
      est.best_capacity = c;
      est.observed = pairs.observed;
      est.simulated_at_best = pairs.simulated;
    }
  }
  return est;
}

}  // namespace

CapacityEstimate estimate_capacity(const CapacityObservation& obs,
                                   std::span<const std::int64_t> candidates) {
  return estimate_on(obs, obs.input, candidates);
}

CapacityEstimate estimate_capacity(const CapacityObservation& obs, const CapacityGrid& grid) {
  const auto values = grid.values();
  return estimate_capacity(obs, values);
}

StabilityReport stability_analysis(const CapacityObservation& obs, const CapacityGrid& grid,
                                   int runs, std::uint64_t seed, double noise_scale) {
  if (runs < 1) throw Error(ErrorCode::InvalidArgument, "stability needs at least one run");
  const auto candidates = grid.values();
  StabilityReport report;
  report.runs = runs;
  report.seed = seed;
  report.noise_scale = noise_scale;
  const std::size_t n_st = obs.input.stations.size();
  for (int run = 0; run < runs; ++run) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(run)));
    SimInput shifted = obs.input;
    std::vector<std::optional<Seconds>> last(n_st);
    for (auto& train : shifted.trains) {
      const auto shift =
          static_cast<Seconds>(std::llround(std::abs(rng.normal()) * 60.0 * noise_scale));
      for (std::size_t s = 0; s < n_st; ++s) {
        auto& dep = train.departures[s];
        if (!dep) continue;
        *dep += shift;
        if (last[s] && *dep <= *last[s]) *dep = *last[s] + 1;
        last[s] = dep;
      }
    }
    report.estimates.push_back(estimate_on(obs, std::move(shifted), candidates).best_capacity);
  }
  std::vector<double> sorted(report.estimates.begin(), report.estimates.end());
  std::sort(sorted.begin(), sorted.end());
  report.q1 = stats::quantile_sorted(sorted, 0.25);
  report.median = stats::quantile_sorted(sorted, 0.5);
  report.q3 = stats::quantile_sorted(sorted, 0.75);
  report.mean = stats::mean(sorted);
  return report;
}

void write_loss_curve_csv(std::ostream& out, const CapacityEstimate& estimate) {
  out << "capacity,mae\n";
  char buf[64];
  for (const auto& [c, loss] : estimate.loss_curve) {
    std::snprintf(buf, sizeof buf, "%lld,%.6f\n", static_cast<long long>(c), loss);
    out << buf;
  }
}

void write_stability_csv(std::ostream& out, const StabilityReport& report) {
  out << "run,capacity\n";
  for (std::size_t r = 0; r < report.estimates.size(); ++r) {
    out << r << ',' << report.estimates[r] << '\n';
  }
}

nlohmann::json capacity_report(const CapacityEstimate& estimate) {
  nlohmann::json doc;
  doc["report_version"] = 1;
  doc["best_capacity"] = estimate.best_capacity;
  doc["best_loss"] = estimate.best_loss;
  doc["observed"] = estimate.observed;
  doc["simulated_at_best"] = estimate.simulated_at_best;
  doc["note"] =
      "riders already aboard before the modeled stations are not counted, so the estimate is a "
      "lower bound on physical capacity";
  return doc;
}

nlohmann::json stability_report(const StabilityReport& report) {
  nlohmann::json doc;
  doc["report_version"] = 1;
  doc["runs"] = report.runs;
  doc["seed"] = report.seed;
  doc["noise_scale"] = report.noise_scale;
  doc["q1"] = report.q1;
  doc["median"] = report.median;
  doc["q3"] = report.q3;
  doc["mean"] = report.mean;
  doc["estimates"] = report.estimates;
  return doc;
}

}  // namespace eventrail
