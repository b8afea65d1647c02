#include "cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "eventrail/boardsim.hpp"
#include "eventrail/capacity.hpp"
#include "eventrail/csv.hpp"
#include "eventrail/error.hpp"
#include "eventrail/events.hpp"
#include "eventrail/features.hpp"
#include "eventrail/network.hpp"
#include "eventrail/pipeline.hpp"
#include "eventrail/predict.hpp"
#include "eventrail/rng.hpp"
#include "eventrail/scheduleopt.hpp"
#include "eventrail/signatures.hpp"
#include "eventrail/synthgen.hpp"
#include "eventrail/taps.hpp"
#include "eventrail/trips.hpp"

namespace eventrail::cli {
namespace {

namespace fs = std::filesystem;

// Usage problems found after CLI11 parsing (conflicting or missing inputs).
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Prefixes data errors with the file they came from.
template <typename F>
auto from_file(const fs::path& path, F&& read) {
  try {
    return read(path);
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.message(), e.line());
  }
}

template <typename F>
void write_artifact(const fs::path& dir, const std::string& name, F&& body) {
  fs::create_directories(dir);
  const fs::path path = dir / name;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  body(out);
  if (!out) throw Error(ErrorCode::Io, "write failed for " + path.string());
}

void write_json(const fs::path& dir, const std::string& name, const nlohmann::json& doc) {
  write_artifact(dir, name, [&](std::ostream& o) { o << doc.dump(2) << '\n'; });
}

DayNumber parse_date_arg(const std::string& text) {
  const auto d = try_parse_date(text);
  if (!d) throw UsageError("bad date '" + text + "' (want YYYY-MM-DD)");
  return to_day_number(*d);
}

Seconds parse_clock_arg(const std::string& text) {
  const auto t = try_parse_clock(text);
  if (!t) throw UsageError("bad clock time '" + text + "' (want HH:MM[:SS])");
  return *t;
}

Seconds parse_timestamp_arg(const std::string& text) {
  const auto t = try_parse_timestamp(text);
  if (!t) throw UsageError("bad timestamp '" + text + "'");
  return *t;
}

UseType parse_direction(const std::string& text) {
  if (text == "entry" || text == "ENTRY") return UseType::Entry;
  if (text == "exit" || text == "EXIT") return UseType::Exit;
  throw UsageError("direction must be entry or exit");
}

Heading parse_heading_arg(const std::string& text) {
  const auto h = parse_heading(text);
  if (!h) throw UsageError("bad heading '" + text + "'");
  return *h;
}

// --- schedule / arrival files ----------------------------------------------

// train_index,station,departure: departures are clock times of `day`.
SimInput read_station_schedule(const fs::path& path, DayNumber day) {
  return from_file(path, [&](const fs::path& p) {
    std::ifstream in(p);
    if (!in) throw Error(ErrorCode::Io, "cannot open " + p.string());
    csv::Reader reader(in);
    const auto c_train = reader.column("train_index");
    const auto c_station = reader.column("station");
    const auto c_dep = reader.column("departure");
    SimInput input;
    std::map<long long, std::map<std::string, Seconds>> rows;
    while (reader.next()) {
      const auto& r = reader.row();
      if (r.size() <= std::max({c_train, c_station, c_dep})) {
        throw Error(ErrorCode::BadField, "short row", reader.line());
      }
      const auto t = try_parse_clock(r[c_dep]);
      if (!t) throw Error(ErrorCode::BadTimestamp, "bad departure", reader.line());
      long long train = 0;
      try {
        train = std::stoll(r[c_train]);
      } catch (const std::exception&) {
        throw Error(ErrorCode::BadField, "bad train_index", reader.line());
      }
      if (std::find(input.stations.begin(), input.stations.end(), r[c_station]) ==
          input.stations.end()) {
        input.stations.push_back(r[c_station]);
      }
      rows[train][r[c_station]] = midnight_of(day) + *t;
    }
    for (const auto& [train, stops] : rows) {
      ScheduledTrain st;
      for (const auto& s : input.stations) {
        const auto it = stops.find(s);
        st.departures.push_back(it == stops.end() ? std::nullopt
                                                  : std::optional<Seconds>(it->second));
      }
      input.trains.push_back(std::move(st));
    }
    input.arrivals.assign(input.stations.size(), {});
    return input;
  });
}

// train_index,departure (or the station form, filtered to `station`).
Schedule read_anchor_schedule(const fs::path& path, DayNumber day, const std::string& station) {
  return from_file(path, [&](const fs::path& p) {
    std::ifstream in(p);
    if (!in) throw Error(ErrorCode::Io, "cannot open " + p.string());
    csv::Reader reader(in);
    const auto c_dep = reader.column("departure");
    const auto c_station = reader.find_column("station");
    Schedule s;
    while (reader.next()) {
      const auto& r = reader.row();
      if (c_dep >= r.size()) throw Error(ErrorCode::BadField, "short row", reader.line());
      if (c_station && !station.empty() && r.at(*c_station) != station) continue;
      const auto t = try_parse_clock(r[c_dep]);
      if (!t) throw Error(ErrorCode::BadTimestamp, "bad departure", reader.line());
      s.departures.push_back(midnight_of(day) + *t);
    }
    std::sort(s.departures.begin(), s.departures.end());
    if (!s.departures.empty()) {
      s.window_start = s.departures.front();
      s.window_end = s.departures.back();
    }
    return s;
  });
}

// station,arrival (timestamps).
std::map<std::string, std::vector<Seconds>> read_arrivals(const fs::path& path) {
  return from_file(path, [&](const fs::path& p) {
    std::ifstream in(p);
    if (!in) throw Error(ErrorCode::Io, "cannot open " + p.string());
    csv::Reader reader(in);
    const auto c_station = reader.column("station");
    const auto c_arrival = reader.column("arrival");
    std::map<std::string, std::vector<Seconds>> out;
    while (reader.next()) {
      const auto& r = reader.row();
      if (r.size() <= std::max(c_station, c_arrival)) {
        throw Error(ErrorCode::BadField, "short row", reader.line());
      }
      const auto t = try_parse_timestamp(r[c_arrival]);
      if (!t) throw Error(ErrorCode::BadTimestamp, "bad arrival", reader.line());
      out[r[c_station]].push_back(*t);
    }
    for (auto& [s, v] : out) std::sort(v.begin(), v.end());
    return out;
  });
}

void write_arrivals(std::ostream& out, const SimInput& input) {
  out << "station,arrival\n";
  for (std::size_t s = 0; s < input.stations.size(); ++s) {
    for (Seconds t : input.arrivals[s]) out << input.stations[s] << ',' << format_timestamp(t) << '\n';
  }
}

std::vector<Seconds> arrivals_for(const std::map<std::string, std::vector<Seconds>>& all,
                                  const std::string& station) {
  if (!station.empty()) {
    const auto it = all.find(station);
    if (it == all.end()) throw Error(ErrorCode::UnknownStation, "no arrivals for " + station);
    return it->second;
  }
  std::vector<Seconds> merged;
  for (const auto& [s, v] : all) merged.insert(merged.end(), v.begin(), v.end());
  std::sort(merged.begin(), merged.end());
  return merged;
}

// --- option bundles ----------------------------------------------------------

struct PipelineArgs {
  std::string trips;
  std::string network;
  std::string event_station;
  std::vector<std::string> boarding;
  std::string heading = "EAST";
  std::string date;
  std::string from;
  std::string to;
  double max_wait_min = 45.0;
  std::size_t min_cluster_size = 50;
  std::size_t min_samples = 0;
  std::vector<int> refine;
  std::string kind = "of_new";
  std::string out_dir = ".";

  void add(CLI::App* app) {
    app->add_option("--trips", trips, "Chained trips CSV")->required();
    app->add_option("--network", network, "Network JSON")->required();
    app->add_option("--event-station", event_station, "Station serving the venue")->required();
    app->add_option("--boarding", boarding, "Boarding stations (comma separated)")
        ->delimiter(',');
    app->add_option("--heading", heading, "Direction of the analysed trains")
        ->capture_default_str();
    app->add_option("--date", date, "Service date YYYY-MM-DD")->required();
    app->add_option("--from", from, "Window start HH:MM (raw entry time)");
    app->add_option("--to", to, "Window end HH:MM (inclusive)");
    app->add_option("--max-wait-min", max_wait_min, "Drop implied waits above this")
        ->capture_default_str();
    app->add_option("--min-cluster-size", min_cluster_size)->capture_default_str();
    app->add_option("--min-samples", min_samples, "0 means min-cluster-size")
        ->capture_default_str();
    app->add_option("--refine", refine, "First-pass cluster ids to re-cluster")->delimiter(',');
    app->add_option("--kind", kind, "Left-behind proportion: of_new or of_total")
        ->capture_default_str();
    app->add_option("--out-dir", out_dir)->capture_default_str();
  }

  DayNumber day() const { return parse_date_arg(date); }

  PipelineResult run() const {
    const auto net = from_file(network, [](const fs::path& p) { return NetworkModel::load(p); });
    const auto trip_list = from_file(trips, [](const fs::path& p) { return read_trips(p); });
    PipelineConfig cfg;
    cfg.event_station = event_station;
    cfg.boarding_stations = boarding.empty() ? std::vector<std::string>{event_station} : boarding;
    cfg.heading = parse_heading_arg(heading);
    const Seconds midnight = midnight_of(day());
    if (!from.empty()) cfg.entry_from = midnight + parse_clock_arg(from);
    if (!to.empty()) cfg.entry_to = midnight + parse_clock_arg(to);
    cfg.max_wait = static_cast<Seconds>(max_wait_min * 60.0);
    cfg.hdbscan.min_cluster_size = min_cluster_size;
    cfg.hdbscan.min_samples = min_samples;
    cfg.refine = refine;
    cfg.kind = parse_proportion_kind(kind);
    return run_pipeline(trip_list, net, cfg);
  }
};

struct GridArgs {
  std::int64_t lo = 300;
  std::int64_t hi = 1200;
  std::int64_t step = 1;

  void add(CLI::App* app) {
    app->add_option("--grid-lo", lo)->capture_default_str();
    app->add_option("--grid-hi", hi)->capture_default_str();
    app->add_option("--grid-step", step)->capture_default_str();
  }
  CapacityGrid grid() const { return {lo, hi, step}; }
};

nlohmann::json schedule_json(const RecoveredSchedule& s, const ClusterRidersResult& c,
                             const AdjustResult& a) {
  nlohmann::json trains = nlohmann::json::array();
  for (const auto& t : s.trains) {
    nlohmann::json deps = nlohmann::json::object();
    for (const auto& [st, when] : t.departures) deps[st] = format_timestamp(when);
    trains.push_back({{"train_index", t.train_index},
                      {"departures", deps},
                      {"serves", t.serves},
                      {"skips", t.skips}});
  }
  return {{"report_version", 1},
          {"stations", s.stations},
          {"n_trains", s.trains.size()},
          {"adjusted_trips", a.trips.size()},
          {"excluded", {{"filtered", a.filtered},
                        {"off_path", a.off_path},
                        {"bad_wait", a.bad_wait},
                        {"flagged", a.flagged}}},
          {"noise", c.noise},
          {"first_pass_clusters", c.first_pass.n_clusters},
          {"trains", trains},
          {"warnings", s.warnings}};
}

// --- predict helpers ---------------------------------------------------------

struct ModelArgs {
  std::string features;
  std::string model = "lr_rf";
  std::string target = "post_event";
  int trees = 0;
  int mtry = 0;
  int min_leaf = 5;
  std::optional<std::uint64_t> seed;
  std::string out_dir = ".";

  void add(CLI::App* app, bool with_model) {
    app->add_option("--features", features, "Feature rows CSV")->required();
    if (with_model) {
      app->add_option("--model", model, "lr, rf, lr_rf or mean")->capture_default_str();
    }
    app->add_option("--target", target, "post_event or whole_day")->capture_default_str();
    app->add_option("--trees", trees, "0: 1500 for rf, 800 for lr_rf");
    app->add_option("--mtry", mtry, "0: max(1, p/3)");
    app->add_option("--min-leaf", min_leaf)->capture_default_str();
    app->add_option("--seed", seed, "Random seed (required for forests)");
    app->add_option("--out-dir", out_dir)->capture_default_str();
  }

  ModelSpec spec() const {
    ModelSpec s = ModelSpec::defaults(parse_model_kind(model));
    s.target = parse_target(target);
    if (trees > 0) s.forest.trees = trees;
    s.forest.mtry = mtry;
    s.forest.min_leaf = min_leaf;
    const bool random = s.kind == ModelKind::Forest || s.kind == ModelKind::LrRf;
    if (random && !seed) throw UsageError("--seed is required for forest models");
    s.forest.seed = seed.value_or(0);
    return s;
  }

  std::vector<FeatureRow> rows() const {
    return from_file(features, [](const fs::path& p) {
      std::ifstream in(p);
      if (!in) throw Error(ErrorCode::Io, "cannot open " + p.string());
      return parse_feature_rows(in);
    });
  }
};

std::map<DayNumber, std::vector<double>> counts_by_day(const std::vector<TapEvent>& taps,
                                                       const std::string& station, UseType dir) {
  return daily_counts(taps, station, dir);
}

std::vector<std::vector<double>> counts_of(const std::map<DayNumber, std::vector<double>>& counts,
                                           const std::vector<DayNumber>& days) {
  std::vector<std::vector<double>> out;
  for (DayNumber d : days) out.push_back(counts.at(d));
  return out;
}

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Special-event ridership analysis for rail fare-collection data", "eventrail"};
  app.set_config("--config", "", "key=value configuration file; flags override it");
  app.require_subcommand(1);
  std::function<void()> action;

  // chain
  std::string taps_path, out_dir = ".";
  double max_hours = 4.0;
  auto* chain = app.add_subcommand("chain", "Chain taps into trips");
  chain->add_option("taps", taps_path, "Taps CSV")->required();
  chain->add_option("--max-hours", max_hours, "Longest plausible trip")->capture_default_str();
  chain->add_option("--out-dir", out_dir)->capture_default_str();
  chain->callback([&] {
    action = [&] {
      const auto taps = from_file(taps_path, [](const fs::path& p) { return read_taps(p); });
      ChainOptions opt;
      opt.max_trip_duration = static_cast<Seconds>(max_hours * 3600.0);
      const auto result = chain_trips(taps, opt);
      write_artifact(out_dir, "trips.csv", [&](std::ostream& o) { write_trips(o, result.trips); });
      write_artifact(out_dir, "anomalies.csv",
                     [&](std::ostream& o) { write_anomalies(o, result.anomalies); });
      out << result.trips.size() << " trips, " << result.anomalies.size() << " anomalies\n";
    };
  });

  // signature
  std::string station, day_type = "WEEKDAY", direction = "entry";
  std::vector<std::string> exclude;
  std::size_t min_days = 8;
  auto* sig = app.add_subcommand("signature", "Baseline ridership signature of one station");
  sig->add_option("--taps", taps_path)->required();
  sig->add_option("--station", station)->required();
  sig->add_option("--day-type", day_type, "WEEKDAY or WEEKEND")->capture_default_str();
  sig->add_option("--direction", direction, "entry or exit")->capture_default_str();
  sig->add_option("--exclude", exclude, "Dates to leave out (event days)")->delimiter(',');
  sig->add_option("--min-days", min_days)->capture_default_str();
  sig->add_option("--out-dir", out_dir)->capture_default_str();
  sig->callback([&] {
    action = [&] {
      const auto taps = from_file(taps_path, [](const fs::path& p) { return read_taps(p); });
      DayType dt;
      if (day_type == "WEEKDAY") dt = DayType::Weekday;
      else if (day_type == "WEEKEND") dt = DayType::Weekend;
      else throw UsageError("day type must be WEEKDAY or WEEKEND");
      std::vector<DayNumber> ex;
      for (const auto& d : exclude) ex.push_back(parse_date_arg(d));
      SignatureOptions opt;
      opt.min_days = min_days;
      const auto days = baseline_days(taps, dt, ex);
      const auto s = build_signature(taps, station, parse_direction(direction), dt, days, opt);
      write_artifact(out_dir, "signature.csv", [&](std::ostream& o) { write_signature_csv(o, s); });
      out << "signature over " << days.size() << " days\n";
    };
  });

  // event-ridership
  std::string date;
  int pad_bins = 2;
  auto* er = app.add_subcommand("event-ridership", "Riders attributable to an event day");
  er->add_option("--taps", taps_path)->required();
  er->add_option("--station", station)->required();
  er->add_option("--date", date, "Event service date")->required();
  er->add_option("--direction", direction)->capture_default_str();
  er->add_option("--exclude", exclude, "Other event days to keep out of the baseline")
      ->delimiter(',');
  er->add_option("--min-days", min_days)->capture_default_str();
  er->add_option("--pad-bins", pad_bins)->capture_default_str();
  er->add_option("--out-dir", out_dir)->capture_default_str();
  er->callback([&] {
    action = [&] {
      const auto taps = from_file(taps_path, [](const fs::path& p) { return read_taps(p); });
      const DayNumber day = parse_date_arg(date);
      const DayType dt = day_type_of(day);
      std::vector<DayNumber> ex{day};
      for (const auto& d : exclude) ex.push_back(parse_date_arg(d));
      SignatureOptions opt;
      opt.min_days = min_days;
      const UseType dir = parse_direction(direction);
      const auto s = build_signature(taps, station, dir, dt, baseline_days(taps, dt, ex), opt);
      const auto counts = counts_for_day(taps, station, dir, day);
      const auto est = estimate_event_ridership(s, counts, format_date(day), pad_bins);
      write_artifact(out_dir, "event_ridership.csv",
                     [&](std::ostream& o) { write_estimate_csv(o, s, counts, est); });
      write_json(out_dir, "event_ridership.json", estimate_report(est));
      out << "event riders " << est.total << " (upper bound " << est.upper_bound << ")\n";
    };
  });

  // throughput
  std::string events_path, category = "soccer";
  auto* tp = app.add_subcommand("throughput", "Post-event arrival curve over past games");
  tp->add_option("--taps", taps_path)->required();
  tp->add_option("--events", events_path)->required();
  tp->add_option("--station", station)->required();
  tp->add_option("--category", category, "Only events whose category contains this")
      ->capture_default_str();
  tp->add_option("--out-dir", out_dir)->capture_default_str();
  tp->callback([&] {
    action = [&] {
      const auto taps = from_file(taps_path, [](const fs::path& p) { return read_taps(p); });
      const auto events = from_file(events_path, [](const fs::path& p) { return load_events(p); });
      std::string needle = category;
      std::transform(needle.begin(), needle.end(), needle.begin(), ::tolower);
      std::vector<GameArrivals> games;
      for (const auto& e : events) {
        std::string c = e.category;
        std::transform(c.begin(), c.end(), c.begin(), ::tolower);
        if (c.find(needle) == std::string::npos) continue;
        GameArrivals g;
        g.end_time = adjusted_end_time(e.begin, average_game_length(e.category),
                                       e.end_offset_minutes.value_or(0.0));
        for (const auto& t : taps) {
          if (t.use_type == UseType::Entry && t.station_id == station &&
              day_of(t.timestamp) == day_of(e.begin)) {
            g.arrivals.push_back(t.timestamp);
          }
        }
        games.push_back(std::move(g));
      }
      const auto curve = throughput_curve(games);
      write_artifact(out_dir, "throughput.csv",
                     [&](std::ostream& o) { write_throughput_csv(o, curve); });
      out << games.size() << " games\n";
    };
  });

  // recover-schedule
  PipelineArgs rs_args;
  auto* rs = app.add_subcommand("recover-schedule", "Cluster riders into trains");
  rs_args.add(rs);
  rs->callback([&] {
    action = [&] {
      const auto r = rs_args.run();
      const fs::path dir = rs_args.out_dir;
      write_artifact(dir, "clusters.csv", [&](std::ostream& o) {
        write_clusters_csv(o, r.clusters.trains, r.adjusted.trips);
      });
      write_artifact(dir, "schedule.csv",
                     [&](std::ostream& o) { write_schedule_csv(o, r.schedule, rs_args.day()); });
      write_artifact(dir, "arrivals.csv",
                     [&](std::ostream& o) { write_arrivals(o, r.observation.input); });
      write_json(dir, "schedule.json", schedule_json(r.schedule, r.clusters, r.adjusted));
      out << r.schedule.trains.size() << " trains recovered\n";
      for (const auto& w : r.schedule.warnings) err << "warning: " << w << '\n';
    };
  });

  // estimate-capacity
  PipelineArgs ec_args;
  GridArgs ec_grid;
  auto* ec = app.add_subcommand("estimate-capacity", "Fit train capacity to left-behind shares");
  ec_args.add(ec);
  ec_grid.add(ec);
  ec->callback([&] {
    action = [&] {
      const auto r = ec_args.run();
      const auto est = estimate_capacity(r.observation, ec_grid.grid());
      write_artifact(ec_args.out_dir, "loss_curve.csv",
                     [&](std::ostream& o) { write_loss_curve_csv(o, est); });
      auto doc = capacity_report(est);
      doc["proportion_kind"] = to_string(r.observation.kind);
      doc["n_trains"] = r.schedule.trains.size();
      write_json(ec_args.out_dir, "capacity.json", doc);
      out << "best_capacity " << est.best_capacity << " (MAE " << est.best_loss << ")\n";
    };
  });

  // stability
  PipelineArgs st_args;
  GridArgs st_grid;
  int runs = 100;
  std::uint64_t seed = 0;
  double noise_scale = 1.0;
  auto* st = app.add_subcommand("stability", "Capacity estimate under schedule noise");
  st_args.add(st);
  st_grid.add(st);
  st->add_option("--runs", runs)->capture_default_str();
  st->add_option("--seed", seed)->required();
  st->add_option("--noise-scale", noise_scale, "Minutes per unit of |z|")->capture_default_str();
  st->callback([&] {
    action = [&] {
      const auto r = st_args.run();
      const auto rep = stability_analysis(r.observation, st_grid.grid(), runs, seed, noise_scale);
      write_artifact(st_args.out_dir, "stability.csv",
                     [&](std::ostream& o) { write_stability_csv(o, rep); });
      write_json(st_args.out_dir, "stability.json", stability_report(rep));
      out << "q1 " << rep.q1 << " median " << rep.median << " q3 " << rep.q3 << " mean "
          << rep.mean << '\n';
    };
  });

  // simulate
  std::string schedule_path, arrivals_path;
  std::int64_t capacity = 0;
  auto* sim = app.add_subcommand("simulate", "Simulate boarding on a schedule");
  sim->add_option("--schedule", schedule_path, "train_index,station,departure CSV")->required();
  sim->add_option("--arrivals", arrivals_path, "station,arrival CSV")->required();
  sim->add_option("--capacity", capacity)->required();
  sim->add_option("--date", date, "Service date of the schedule")->required();
  sim->add_option("--out-dir", out_dir)->capture_default_str();
  sim->callback([&] {
    action = [&] {
      SimInput input = read_station_schedule(schedule_path, parse_date_arg(date));
      const auto arr = read_arrivals(arrivals_path);
      for (std::size_t s = 0; s < input.stations.size(); ++s) {
        const auto it = arr.find(input.stations[s]);
        if (it != arr.end()) input.arrivals[s] = it->second;
      }
      for (auto& t : input.trains) t.capacity = capacity;
      const auto result = simulate_boarding(input);
      const auto rows = left_behind_table(input, result);
      write_artifact(out_dir, "left_behind.csv",
                     [&](std::ostream& o) { write_left_behind_csv(o, rows); });
      write_artifact(out_dir, "riders.csv",
                     [&](std::ostream& o) { write_riders_csv(o, input, result); });
      write_json(out_dir, "simulation.json", simulation_report(input, result));
      out << result.unserved << " unserved riders\n";
    };
  });

  // optimize-schedule
  std::string curve_path, window_start, from, to;
  double prediction = 0.0;
  ForecastShares shares;
  auto* opt = app.add_subcommand("optimize-schedule",
                                 "Optimal schedule from arrivals, or proposed from a forecast");
  opt->add_option("--capacity", capacity)->required();
  auto* o_arr = opt->add_option("--arrivals", arrivals_path, "station,arrival CSV");
  opt->add_option("--station", station, "Use only this station's arrivals");
  opt->add_option("--date", date, "Service date (for --from/--to and output clock times)");
  opt->add_option("--from", from, "Only arrivals at or after HH:MM");
  opt->add_option("--to", to, "Only arrivals before HH:MM");
  auto* o_curve = opt->add_option("--curve", curve_path, "Throughput curve CSV");
  opt->add_option("--prediction", prediction, "Predicted event ridership");
  opt->add_option("--window-start", window_start, "Timestamp of the curve's first bin");
  opt->add_option("--east-share", shares.east_share)->capture_default_str();
  opt->add_option("--peak-share", shares.peak_share)->capture_default_str();
  opt->add_option("--buffer", shares.buffer)->capture_default_str();
  opt->add_option("--out-dir", out_dir)->capture_default_str();
  o_arr->excludes(o_curve);
  opt->callback([&] {
    action = [&] {
      Schedule s;
      if (!arrivals_path.empty()) {
        auto arr = arrivals_for(read_arrivals(arrivals_path), station);
        if (!from.empty() || !to.empty()) {
          if (date.empty()) throw UsageError("--from/--to need --date");
          const Seconds m = midnight_of(parse_date_arg(date));
          const Seconds lo = from.empty() ? INT64_MIN : m + parse_clock_arg(from);
          const Seconds hi = to.empty() ? INT64_MAX : m + parse_clock_arg(to);
          std::erase_if(arr, [&](Seconds t) { return t < lo || t >= hi; });
        }
        s = optimal_schedule(arr, capacity);
      } else if (!curve_path.empty()) {
        if (window_start.empty()) throw UsageError("--curve needs --window-start");
        const auto curve = from_file(curve_path, [](const fs::path& p) {
          std::ifstream in(p);
          if (!in) throw Error(ErrorCode::Io, "cannot open " + p.string());
          return read_throughput_csv(in);
        });
        const auto f = forecast_arrivals(curve, prediction, parse_timestamp_arg(window_start), shares);
        s = propose_schedule(f, capacity);
        write_artifact(out_dir, "forecast.csv", [&](std::ostream& o) {
          o << "bin,bin_start,riders\n";
          for (std::size_t k = 0; k < f.bins.size(); ++k) {
            o << k << ',' << format_timestamp(f.start + static_cast<Seconds>(k) * f.bin_width)
              << ',' << f.bins[k] << '\n';
          }
        });
      } else {
        throw UsageError("give --arrivals or --curve");
      }
      const DayNumber day = date.empty() ? day_of(s.departures.front()) : parse_date_arg(date);
      write_artifact(out_dir, "schedule.csv",
                     [&](std::ostream& o) { write_schedule_csv(o, s, day); });
      nlohmann::json doc{{"report_version", 1},
                         {"capacity", s.capacity},
                         {"n_trains", s.departures.size()},
                         {"headways_seconds", headways(s)}};
      write_json(out_dir, "schedule.json", doc);
      out << s.departures.size() << " trains\n";
    };
  });

  // compare
  std::string actual_path, proposed_path;
  Seconds after_headway = 600;
  auto* cmp = app.add_subcommand("compare", "Simulate two schedules on the same arrivals");
  cmp->add_option("--actual", actual_path)->required();
  cmp->add_option("--proposed", proposed_path)->required();
  cmp->add_option("--arrivals", arrivals_path)->required();
  cmp->add_option("--station", station, "Anchor station in multi-station files");
  cmp->add_option("--capacity", capacity)->required();
  cmp->add_option("--date", date)->required();
  cmp->add_option("--after-headway", after_headway, "Seconds between trains after a schedule")
      ->capture_default_str();
  cmp->add_option("--out-dir", out_dir)->capture_default_str();
  cmp->callback([&] {
    action = [&] {
      const DayNumber day = parse_date_arg(date);
      const auto actual = read_anchor_schedule(actual_path, day, station);
      const auto proposed = read_anchor_schedule(proposed_path, day, station);
      const auto arr = arrivals_for(read_arrivals(arrivals_path), station);
      const auto rep = compare_schedules(actual, proposed, arr, capacity, after_headway);
      write_artifact(out_dir, "comparison.csv",
                     [&](std::ostream& o) { write_comparison_csv(o, rep); });
      write_json(out_dir, "comparison.json", comparison_report(rep));
      write_comparison_csv(out, rep);
    };
  });

  // predict
  auto* pred = app.add_subcommand("predict", "Ridership prediction models");
  pred->require_subcommand(1);
  std::string pf_events, pf_taps;
  auto* pf = pred->add_subcommand("features", "Build feature rows with ridership targets");
  pf->add_option("--events", pf_events)->required();
  pf->add_option("--taps", pf_taps)->required();
  pf->add_option("--station", station)->required();
  pf->add_option("--direction", direction)->capture_default_str();
  pf->add_option("--min-days", min_days)->capture_default_str();
  pf->add_option("--out-dir", out_dir)->capture_default_str();
  pf->callback([&] {
    action = [&] {
      const auto events = from_file(pf_events, [](const fs::path& p) { return load_events(p); });
      const auto taps = from_file(pf_taps, [](const fs::path& p) { return read_taps(p); });
      const UseType dir = parse_direction(direction);
      const auto counts = counts_by_day(taps, station, dir);
      std::set<DayNumber> event_days;
      for (const auto& e : events) event_days.insert(day_of(e.begin));
      std::map<DayNumber, RidershipTargets> targets;
      SignatureOptions sopt;
      sopt.min_days = min_days;
      std::map<int, StationSignature> sigs;
      for (DayType dt : {DayType::Weekday, DayType::Weekend}) {
        std::vector<DayNumber> days;
        for (const auto& [d, c] : counts) {
          if (day_type_of(d) == dt && !event_days.count(d)) days.push_back(d);
        }
        if (days.size() >= min_days) {
          sigs.emplace(static_cast<int>(dt),
                       signature_from_counts(station, dt, dir, counts_of(counts, days), sopt));
        }
      }
      for (const auto& e : events) {
        const DayNumber d = day_of(e.begin);
        if (!is_sporting(e.category) || !counts.count(d) || targets.count(d)) continue;
        const auto it = sigs.find(static_cast<int>(day_type_of(d)));
        if (it == sigs.end()) {
          throw Error(ErrorCode::InsufficientBaseline,
                      "no baseline signature for " + format_date(d));
        }
        // The latest sporting event of the day sets the post-event window.
        const EventRecord* first = &e;
        for (const auto& o : events) {
          if (day_of(o.begin) == d && is_sporting(o.category) && o.begin > first->begin) first = &o;
        }
        targets[d] = event_targets(it->second, counts.at(d), first->begin, first->category);
      }
      const auto rows = build_feature_rows(events, targets);
      write_artifact(out_dir, "features.csv",
                     [&](std::ostream& o) { write_feature_rows_csv(o, rows); });
      out << rows.size() << " feature rows\n";
    };
  });

  ModelArgs fit_args;
  std::string model_out = "model.json";
  auto* pfit = pred->add_subcommand("fit", "Fit a model on all rows");
  fit_args.add(pfit, true);
  pfit->add_option("--model-file", model_out, "Output file name inside --out-dir")
      ->capture_default_str();
  pfit->callback([&] {
    action = [&] {
      const auto spec = fit_args.spec();
      const auto rows = fit_args.rows();
      const auto m = fit_model(rows, spec);
      fs::create_directories(fit_args.out_dir);
      m.save(fs::path(fit_args.out_dir) / model_out);
      if (m.linear) {
        out << "intercept " << m.linear->intercept;
        for (std::size_t j = 0; j < m.linear->features.size(); ++j) {
          out << ", " << m.linear->features[j] << ' ' << m.linear->coefficients[j];
        }
        out << '\n';
      }
    };
  });

  ModelArgs cv_args;
  auto* pcv = pred->add_subcommand("loocv", "Leave-one-out cross-validation");
  cv_args.add(pcv, true);
  pcv->callback([&] {
    action = [&] {
      const auto spec = cv_args.spec();
      const auto rows = cv_args.rows();
      const auto m = loocv(rows, spec);
      write_json(cv_args.out_dir, "loocv.json", metrics_report(m, spec));
      write_artifact(cv_args.out_dir, "loocv_predictions.csv", [&](std::ostream& o) {
        o << "date,actual,predicted\n";
        for (std::size_t i = 0; i < rows.size(); ++i) {
          o << format_date(rows[i].date) << ',' << target_value(rows[i], spec.target) << ','
            << m.predictions[i] << '\n';
        }
      });
      out << "MAE " << m.mae << " MAPE " << m.mape << " RMSE " << m.rmse << '\n';
    };
  });

  ModelArgs imp_args;
  imp_args.model = "rf";
  auto* pimp = pred->add_subcommand("importance", "Permutation importance of a random forest");
  imp_args.add(pimp, false);
  pimp->callback([&] {
    action = [&] {
      const auto spec = imp_args.spec();
      const auto rows = imp_args.rows();
      const auto m = fit_model(rows, spec);
      auto imp = feature_importance(rows, m, derive_seed(spec.forest.seed, 0xFFFF));
      std::stable_sort(imp.begin(), imp.end(),
                       [](const Importance& a, const Importance& b) { return a.inc_mse > b.inc_mse; });
      write_artifact(imp_args.out_dir, "importance.csv",
                     [&](std::ostream& o) { write_importance_csv(o, imp); });
      write_importance_csv(out, imp);
    };
  });

  // synth
  std::string spec_path;
  std::optional<std::uint64_t> synth_seed;
  auto* syn = app.add_subcommand("synth", "Generate synthetic fare data from a scenario");
  syn->add_option("--spec", spec_path, "Scenario JSON")->required();
  syn->add_option("--seed", synth_seed, "Overrides the scenario seed")->required();
  syn->add_option("--out-dir,--out", out_dir)->capture_default_str();
  syn->callback([&] {
    action = [&] {
      auto spec = from_file(spec_path, [](const fs::path& p) { return ScenarioSpec::load(p); });
      spec.seed = *synth_seed;
      const auto data = generate(spec);
      write_artifact(out_dir, "taps.csv", [&](std::ostream& o) { write_taps(o, data.taps); });
      if (data.truth) write_json(out_dir, "truth.json", data.truth->to_json());
      out << data.taps.size() << " taps\n";
    };
  });

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsageError;
  }
  try {
    if (action) action();
    return kOk;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsageError;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kDataError;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kDataError;
  }
}

}  // namespace eventrail::cli
