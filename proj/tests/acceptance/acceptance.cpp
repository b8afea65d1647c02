// Acceptance run: one PASS/FAIL line per criterion. Exit status is the number
// of failing criteria. Pass a criterion number to run only that one.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "boardsim_oracle.hpp"
#include "cli.hpp"
#include "eventrail/boardsim.hpp"
#include "eventrail/capacity.hpp"
#include "eventrail/hdbscan.hpp"
#include "eventrail/predict.hpp"
#include "eventrail/rng.hpp"
#include "eventrail/scheduleopt.hpp"
#include "eventrail/signatures.hpp"
#include "eventrail/stats.hpp"
#include "scenarios.hpp"

namespace fs = std::filesystem;
using namespace eventrail;
using namespace eventrail::testing;

namespace {

// Tolerances and budgets.
constexpr double kC1RuntimeSec = 10.0;
constexpr double kC2RelTol = 0.02;
constexpr double kC2RuntimeSec = 120.0;
constexpr std::int64_t kC3CapacityTol = 2;
constexpr double kC3ProportionTol = 0.02;
constexpr double kC3RuntimeSec = 60.0;
constexpr double kC4Band = 0.03;
constexpr double kC4RuntimeSec = 300.0;
constexpr double kC5WaitTol = 0.5;
constexpr double kC7RelTol = 0.10;
constexpr int kC8MapeWins = 90;
constexpr int kC8ImportanceWins = 95;
constexpr double kC8SlopeTol = 0.01;
constexpr int kC8LoocvTrees = 60;  // library default 800 is out of budget for 100 x 130 folds
constexpr int kC8ImportanceTrees = 500;

constexpr std::int64_t kFixtureCapacity = 707;

struct Outcome {
  bool pass = false;
  std::string detail;
};

template <typename... A>
std::string format(const char* f, A... a) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, a...);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// ---------------------------------------------------------------------------
// 1. Boarding simulation against the per-rider event-loop oracle.

SimInput random_instance(Rng& rng) {
  SimInput in;
  const auto n_st = static_cast<std::size_t>(rng.uniform_int(1, 3));
  const auto n_tr = static_cast<std::size_t>(rng.uniform_int(1, 5));
  for (std::size_t s = 0; s < n_st; ++s) in.stations.push_back("S" + std::to_string(s));
  const Seconds hop = rng.uniform_int(1, 90);
  Seconds base = rng.uniform_int(0, 200);
  for (std::size_t i = 0; i < n_tr; ++i) {
    ScheduledTrain t;
    t.capacity = rng.uniform_int(0, 60);
    for (std::size_t s = 0; s < n_st; ++s) {
      if (rng.uniform() < 0.2) {
        t.departures.push_back(std::nullopt);
      } else {
        t.departures.push_back(base + static_cast<Seconds>(s) * hop);
      }
    }
    in.trains.push_back(std::move(t));
    base += rng.uniform_int(1, 300);
  }
  in.arrivals.assign(n_st, {});
  const auto riders = rng.uniform_int(0, 200);
  for (std::int64_t k = 0; k < riders; ++k) {
    const auto s = static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(n_st) - 1));
    Seconds a = rng.uniform_int(-100, base + 100);
    // Some riders land exactly on a stop time.
    if (rng.uniform() < 0.1) {
      const auto& t = in.trains[static_cast<std::size_t>(
          rng.uniform_int(0, static_cast<std::int64_t>(n_tr) - 1))];
      if (t.departures[s]) a = *t.departures[s];
    }
    in.arrivals[s].push_back(a);
  }
  for (auto& a : in.arrivals) std::sort(a.begin(), a.end());
  return in;
}

Outcome criterion_1() {
  const auto t0 = std::chrono::steady_clock::now();
  Rng rng(derive_seed(1, 1));
  int mismatches = 0;
  for (int k = 0; k < 1000; ++k) {
    const SimInput in = random_instance(rng);
    const SimResult got = simulate_boarding(in);
    const SimResult want = oracle_boarding(in);
    if (got.cells != want.cells || got.riders != want.riders || got.unserved != want.unserved ||
        simulate_cells(in) != want.cells) {
      ++mismatches;
    }
  }
  const double sec = seconds_since(t0);
  return {mismatches == 0 && sec < kC1RuntimeSec,
          format("1000 instances, %d mismatches, %.2f s", mismatches, sec)};
}

// ---------------------------------------------------------------------------
// 2. Capacity recovery on seeded synthetic scenarios.

int congested_trains(const GroundTruth& truth, std::size_t scheduled) {
  int n = 0;
  const std::size_t last = truth.input.stations.size() - 1;
  for (std::size_t i = 0; i < scheduled && i < truth.result.cells.size(); ++i) {
    if (truth.result.cells[i][last].left_behind > 0) ++n;
  }
  return n;
}

struct RecoveryStats {
  int scenarios = 0, within = 0, within5 = 0, skipped = 0;
  double worst = 0.0;
  std::string worst_case;
};

RecoveryStats capacity_recovery(Seconds exit_jitter) {
  RecoveryStats st;
  for (std::uint64_t seed = 1; st.scenarios < 50; ++seed) {
    Rng pick(derive_seed(seed, 2));
    const std::int64_t c_true = pick.uniform_int(400, 900);
    const ScenarioSpec spec = capacity_scenario(seed, c_true, exit_jitter);
    const Seconds from = spec.arrivals.back().segments.front().from;
    const Seconds to = spec.trains.back().time;
    const EventRun run = run_event(spec, scenario_config(spec, from, to));
    if (congested_trains(*run.data.truth, spec.trains.size()) < 8) {
      ++st.skipped;
      continue;
    }
    ++st.scenarios;
    const auto est = estimate_capacity(run.result.observation);
    const double rel = std::abs(static_cast<double>(est.best_capacity - c_true)) /
                       static_cast<double>(c_true);
    if (rel <= kC2RelTol) ++st.within;
    if (rel <= 0.05) ++st.within5;
    if (rel >= st.worst) {
      st.worst = rel;
      st.worst_case = format("seed %llu C*=%lld est=%lld", static_cast<unsigned long long>(seed),
                             static_cast<long long>(c_true),
                             static_cast<long long>(est.best_capacity));
    }
  }
  return st;
}

// Exit taps carry the exact boarding outcome. The +-15 s jitter run is a
// robustness report only: a max-of-members departure estimate sits late by
// up to the jitter, which biases the estimate low by a few percent.
Outcome criterion_2() {
  const auto t0 = std::chrono::steady_clock::now();
  const RecoveryStats exact = capacity_recovery(0);
  const double sec = seconds_since(t0);
  const RecoveryStats blurred = capacity_recovery(15);
  return {exact.within == 50 && sec < kC2RuntimeSec,
          format("%d/50 within 2%% (%d under-congested draws skipped), worst %.4f (%s), %.1f s; "
                 "[info] exit jitter +-15 s: %d/50 within 2%%, %d/50 within 5%%, worst %.4f",
                 exact.within, exact.skipped, exact.worst, exact.worst_case.c_str(), sec,
                 blurred.within, blurred.within5, blurred.worst)};
}

// ---------------------------------------------------------------------------
// Fixture run shared by 3, 4 and 5.

const EventRun& fixture_run() {
  static const EventRun run = run_event(sept22_spec(), sept22_config());
  return run;
}

Outcome criterion_3() {
  static const double kPublished[13] = {0.00, 0.18, 0.19, 0.70, 0.29, 0.00, 0.00,
                                        0.31, 0.17, 0.00, 0.00, 0.00, 0.00};
  const auto t0 = std::chrono::steady_clock::now();
  const EventRun& run = fixture_run();
  const auto& sched = run.result.schedule;
  const std::size_t clusters = run.result.clusters.trains.size();
  int skips = 0;
  for (const auto& t : sched.trains) skips += t.skips.count("VINE_CITY") ? 1 : 0;
  const auto est = estimate_capacity(run.result.observation);

  SimInput in = run.result.observation.input;
  for (auto& t : in.trains) t.capacity = kFixtureCapacity;
  const auto cells = simulate_cells(in);
  const std::size_t dome = in.stations.size() - 1;
  double worst = 0.0;
  bool shape = cells.size() == 13;
  for (std::size_t i = 0; shape && i < 13; ++i) {
    worst = std::max(worst, std::abs(cells[i][dome].proportion_of_total - kPublished[i]));
  }
  const double sec = seconds_since(t0);
  const bool pass = clusters == 13 && skips == 3 &&
                    std::abs(est.best_capacity - kFixtureCapacity) <= kC3CapacityTol && shape &&
                    worst <= kC3ProportionTol && sec < kC3RuntimeSec;
  return {pass, format("%zu clusters, %d skip Vine City, best_capacity %lld, max |sim - table| "
                       "%.4f, 21:12 -> %.2f, %.1f s",
                       clusters, skips, static_cast<long long>(est.best_capacity), worst,
                       shape ? cells[3][dome].proportion_of_total : -1.0, sec)};
}

Outcome criterion_4() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto rep = stability_analysis(fixture_run().result.observation, CapacityGrid{}, 100,
                                      20180922);
  const double lo = (1.0 - kC4Band) * kFixtureCapacity;
  const double hi = (1.0 + kC4Band) * kFixtureCapacity;
  const double sec = seconds_since(t0);
  return {rep.q1 >= lo && rep.q3 <= hi && sec < kC4RuntimeSec,
          format("q1 %.2f median %.2f q3 %.2f mean %.2f, band [%.2f, %.2f], %.1f s", rep.q1,
                 rep.median, rep.q3, rep.mean, lo, hi, sec)};
}

// Dome-equivalent arrivals and observed waits of clustered riders in the
// 21:00-22:00 peak.
struct Peak {
  std::vector<Seconds> arrivals;
  std::vector<double> observed_waits;
};

Peak fixture_peak() {
  const EventRun& run = fixture_run();
  const Seconds from = make_timestamp({2018, 9, 22}, 21, 0);
  const Seconds to = make_timestamp({2018, 9, 22}, 22, 0);
  Peak p;
  for (const auto& c : run.result.clusters.trains) {
    for (std::size_t m : c.members) {
      const auto& trip = run.result.adjusted.trips[m];
      if (trip.adjusted_arrival < from || trip.adjusted_arrival >= to) continue;
      p.arrivals.push_back(trip.adjusted_arrival);
      p.observed_waits.push_back(static_cast<double>(c.departure_estimate - trip.adjusted_arrival));
    }
  }
  std::sort(p.arrivals.begin(), p.arrivals.end());
  return p;
}

Outcome criterion_5() {
  const Peak peak = fixture_peak();
  const auto s576 = optimal_schedule(peak.arrivals, 576);
  const auto s707 = optimal_schedule(peak.arrivals, 707);
  auto simulate = [&](const Schedule& s, std::int64_t cap, std::int64_t* left) {
    const SimInput in = single_station_input(s, peak.arrivals, cap);
    const SimResult r = simulate_boarding(in);
    *left = r.unserved;
    for (const auto& row : r.cells) *left += row[0].left_behind;
    return wait_times(r).median / 60.0;
  };
  std::int64_t left576 = 0, left707 = 0;
  const double m576 = simulate(s576, 576, &left576);
  const double m707 = simulate(s707, 707, &left707);
  const double actual = stats::quantile(peak.observed_waits, 0.5) / 60.0;
  const bool pass = s576.departures.size() == 12 && s707.departures.size() == 10 &&
                    left576 == 0 && left707 == 0 && m576 < m707 && m707 < actual &&
                    std::abs(m576 - 2.50) <= kC5WaitTol && std::abs(m707 - 3.03) <= kC5WaitTol &&
                    std::abs(actual - 3.50) <= kC5WaitTol;
  return {pass, format("%zu peak riders; trains %zu @576, %zu @707; left behind %lld/%lld; "
                       "median wait 576 %.2f < 707 %.2f < actual %.2f min",
                       peak.arrivals.size(), s576.departures.size(), s707.departures.size(),
                       static_cast<long long>(left576), static_cast<long long>(left707), m576,
                       m707, actual)};
}

// ---------------------------------------------------------------------------
// 6. HDBSCAN invariances and exact recovery.

// Same partition, allowing for renamed clusters.
bool same_partition(const std::vector<int>& a, const std::vector<int>& b) {
  if (a.size() != b.size()) return false;
  std::map<int, int> ab, ba;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if ((a[i] == kNoise) != (b[i] == kNoise)) return false;
    if (a[i] == kNoise) continue;
    if (ab.emplace(a[i], b[i]).first->second != b[i]) return false;
    if (ba.emplace(b[i], a[i]).first->second != a[i]) return false;
  }
  return true;
}

Outcome criterion_6() {
  Rng rng(derive_seed(6, 6));
  int perm_ok = 0, trans_ok = 0;
  for (int k = 0; k < 200; ++k) {
    std::vector<std::int64_t> pts;
    const auto groups = rng.uniform_int(1, 6);
    for (std::int64_t g = 0; g < groups; ++g) {
      const auto center = rng.uniform_int(0, 20000);
      const auto spread = rng.uniform_int(0, 400);
      const auto n = rng.uniform_int(10, 120);
      for (std::int64_t j = 0; j < n; ++j) pts.push_back(center + rng.uniform_int(-spread, spread));
    }
    for (auto j = rng.uniform_int(0, 30); j > 0; --j) pts.push_back(rng.uniform_int(-2000, 22000));
    HdbscanParams p;
    p.min_cluster_size = static_cast<std::size_t>(rng.uniform_int(5, 40));
    p.min_samples = static_cast<std::size_t>(rng.uniform_int(0, 10));
    if (pts.size() < p.min_cluster_size) p.min_cluster_size = pts.size();
    const auto base = hdbscan_1d(pts, p);

    std::vector<std::size_t> order(pts.size());
    std::iota(order.begin(), order.end(), 0);
    for (std::size_t i = order.size(); i > 1; --i) {
      std::swap(order[i - 1], order[static_cast<std::size_t>(
                                  rng.uniform_int(0, static_cast<std::int64_t>(i) - 1))]);
    }
    std::vector<std::int64_t> shuffled;
    for (std::size_t i : order) shuffled.push_back(pts[i]);
    const auto perm = hdbscan_1d(shuffled, p);
    std::vector<int> back(pts.size());
    for (std::size_t i = 0; i < order.size(); ++i) back[order[i]] = perm.labels[i];
    if (same_partition(base.labels, back) && perm.n_clusters == base.n_clusters) ++perm_ok;

    const auto shift = rng.uniform_int(-2'000'000'000, 2'000'000'000);
    std::vector<std::int64_t> moved = pts;
    for (auto& x : moved) x += shift;
    const auto tr = hdbscan_1d(moved, p);
    if (same_partition(base.labels, tr.labels) && tr.n_clusters == base.n_clusters) ++trans_ok;
  }

  // Separated trains: gap >= 4 minutes between the last rider of one train
  // and the first of the next.
  int exact = 0;
  constexpr int kTrials = 100;
  for (int k = 0; k < kTrials; ++k) {
    std::vector<std::int64_t> pts;
    std::vector<int> truth;
    const auto trains = rng.uniform_int(2, 14);
    std::int64_t t = 0;
    for (std::int64_t i = 0; i < trains; ++i) {
      const auto n = rng.uniform_int(50, 400);
      const auto spread = rng.uniform_int(0, 40);
      for (std::int64_t j = 0; j < n; ++j) {
        pts.push_back(t + rng.uniform_int(-spread, spread));
        truth.push_back(static_cast<int>(i));
      }
      t += 2 * spread + 240 + rng.uniform_int(0, 360);
    }
    const auto c = hdbscan_1d(pts, HdbscanParams{50, 0});
    if (c.n_clusters == trains && same_partition(truth, c.labels)) ++exact;
  }
  return {perm_ok == 200 && trans_ok == 200 && exact == kTrials,
          format("permutation %d/200, translation %d/200, separated trains exact %d/%d", perm_ok,
                 trans_ok, exact, kTrials)};
}

// ---------------------------------------------------------------------------
// 7. Injected-spike recovery.

Outcome criterion_7() {
  constexpr int kBins = 96;
  int within = 0, bounded = 0;
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    Rng rng(derive_seed(7, static_cast<std::uint64_t>(trial)));
    std::vector<double> lambda(kBins);
    for (int b = 0; b < kBins; ++b) {
      lambda[static_cast<std::size_t>(b)] =
          5.0 + 40.0 * std::pow(std::sin(3.14159 * b / kBins), 2) + 10.0 * rng.uniform();
    }
    auto day = [&] {
      std::vector<double> c(kBins);
      for (int b = 0; b < kBins; ++b) {
        c[static_cast<std::size_t>(b)] =
            static_cast<double>(rng.poisson(lambda[static_cast<std::size_t>(b)]));
      }
      return c;
    };
    std::vector<std::vector<double>> days;
    for (int d = 0; d < 20; ++d) days.push_back(day());
    const auto sig = signature_from_counts("DOME_GWCC", DayType::Weekend, UseType::Entry, days);
    std::vector<double> event = day();
    const double spike = static_cast<double>(rng.uniform_int(1500, 3000));
    const int first = static_cast<int>(rng.uniform_int(60, 84));
    const int width = static_cast<int>(rng.uniform_int(2, 6));
    double placed = 0.0;
    for (int b = 0; b < width; ++b) {
      const double share = b + 1 == width ? spike - placed : std::floor(spike / width);
      event[static_cast<std::size_t>(first + b)] += share;
      placed += share;
    }
    const auto est = estimate_event_ridership(sig, event);
    const double rel = std::abs(est.total - spike) / spike;
    worst = std::max(worst, rel);
    if (rel <= kC7RelTol) ++within;
    if (est.total <= est.upper_bound) ++bounded;
  }
  return {within == 100 && bounded == 100,
          format("%d/100 within 10%% (worst %.4f), total <= upper_bound in %d/100", within, worst,
                 bounded)};
}

// ---------------------------------------------------------------------------
// 8. Prediction ordering, slope and importance.

Outcome criterion_8() {
  const auto t0 = std::chrono::steady_clock::now();
  int mape_wins = 0, slope_ok = 0, top = 0;
  double worst_slope = 0.0;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const auto bump = prediction_rows(seed, 130, 1000.0);
    ModelSpec lr = ModelSpec::defaults(ModelKind::Linear);
    ModelSpec both = ModelSpec::defaults(ModelKind::LrRf);
    both.forest.trees = kC8LoocvTrees;
    both.forest.seed = seed;
    if (loocv(bump, both).mape < loocv(bump, lr).mape) ++mape_wins;

    const auto linear = prediction_rows(seed + 1000, 130, 0.0);
    const double slope = fit_linear(linear, Target::PostEvent).coefficients.at(0);
    worst_slope = std::max(worst_slope, std::abs(slope - 0.174));
    if (std::abs(slope - 0.174) <= kC8SlopeTol) ++slope_ok;

    ModelSpec rf = ModelSpec::defaults(ModelKind::Forest);
    rf.forest.trees = kC8ImportanceTrees;
    rf.forest.seed = seed;
    const auto model = fit_model(bump, rf);
    const auto imp = feature_importance(bump, model, derive_seed(seed, 99));
    const auto best = std::max_element(imp.begin(), imp.end(), [](const auto& a, const auto& b) {
      return a.inc_mse < b.inc_mse;
    });
    if (best != imp.end() && best->feature == "attendance") ++top;
  }
  const double sec = seconds_since(t0);
  return {mape_wins >= kC8MapeWins && slope_ok == 100 && top >= kC8ImportanceWins,
          format("LOOCV MAPE LR+RF < LR in %d/100, slope within 0.01 in %d/100 (worst %.4f), "
                 "attendance ranked first in %d/100, %.1f s",
                 mape_wins, slope_ok, worst_slope, top, sec)};
}

// ---------------------------------------------------------------------------
// 9. CLI determinism.

std::map<std::string, std::string> snapshot(const fs::path& dir) {
  std::map<std::string, std::string> files;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (!e.is_regular_file()) continue;
    std::ifstream in(e.path(), std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    files[fs::relative(e.path(), dir).string()] = ss.str();
  }
  return files;
}

int run_cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int rc = cli::run_command(args, out, err);
  if (rc != 0) std::fprintf(stderr, "%s", err.str().c_str());
  return rc;
}

Outcome criterion_9() {
  const fs::path root = fs::temp_directory_path() / "eventrail_acceptance_9";
  fs::remove_all(root);
  const std::string spec = (fixture_dir() / "sept22.json").string();
  const std::string net = (fixture_dir() / "network.json").string();
  for (const char* run : {"a", "b"}) {
    const std::string d = (root / run).string();
    const std::vector<std::string> pipe = {
        "--trips", d + "/trips.csv", "--network", net, "--event-station", "DOME_GWCC",
        "--boarding", "VINE_CITY,DOME_GWCC", "--date", "2018-09-22", "--from", "20:30",
        "--to", "22:00", "--out-dir", d};
    std::vector<std::string> rs = {"recover-schedule"};
    rs.insert(rs.end(), pipe.begin(), pipe.end());
    std::vector<std::string> ec = {"estimate-capacity"};
    ec.insert(ec.end(), pipe.begin(), pipe.end());
    if (run_cli({"synth", "--spec", spec, "--seed", "7", "--out-dir", d}) != 0 ||
        run_cli({"chain", d + "/taps.csv", "--out-dir", d}) != 0 || run_cli(rs) != 0 ||
        run_cli(ec) != 0) {
      return {false, "a pipeline stage failed"};
    }
  }
  const auto a = snapshot(root / "a");
  const auto b = snapshot(root / "b");
  std::size_t bytes = 0;
  for (const auto& [name, body] : a) bytes += body.size();
  fs::remove_all(root);
  return {a == b && a.size() >= 9,
          format("%zu artifacts, %zu bytes, identical: %s", a.size(), bytes,
                 a == b ? "yes" : "no")};
}

// ---------------------------------------------------------------------------
// 10. Proposed versus recovered actual schedules on eight games.

Outcome criterion_10() {
  const auto games = eight_games();
  struct Game {
    EventRun run;
    Seconds end = 0;
  };
  std::vector<Game> runs;
  std::vector<GameArrivals> curve_input;
  for (std::size_t g = 0; g < games.size(); ++g) {
    Game game;
    const ScenarioSpec spec = game_scenario(games[g], 100 + g, &game.end);
    const Seconds midnight = midnight_of(spec.event_date);
    game.run = run_event(spec, scenario_config(spec, game.end - midnight - 45 * 60,
                                               game.end - midnight + 80 * 60));
    GameArrivals ga;
    ga.end_time = game.end;
    for (const auto& t : game.run.data.taps) {
      if (t.use_type == UseType::Entry &&
          (t.station_id == "DOME_GWCC" || t.station_id == "VINE_CITY")) {
        ga.arrivals.push_back(t.timestamp);
      }
    }
    curve_input.push_back(std::move(ga));
    runs.push_back(std::move(game));
  }
  const auto curve = throughput_curve(curve_input);

  int improved = 0, delta_ok = 0;
  std::string rows;
  for (std::size_t g = 0; g < games.size(); ++g) {
    const auto& res = runs[g].run.result;
    Schedule actual;
    actual.capacity = kFixtureCapacity;
    for (const auto& t : res.schedule.trains) {
      actual.departures.push_back(t.departures.at(res.schedule.event_station));
    }
    std::vector<Seconds> arrivals;
    for (const auto& c : res.clusters.trains) {
      for (std::size_t m : c.members) arrivals.push_back(res.adjusted.trips[m].adjusted_arrival);
    }
    std::sort(arrivals.begin(), arrivals.end());
    const auto forecast =
        forecast_arrivals(curve, games[g].predicted / 0.68, runs[g].end - 40 * 60);
    const Schedule proposed = propose_schedule(forecast, kFixtureCapacity);
    const auto rep = compare_schedules(actual, proposed, arrivals, kFixtureCapacity);
    const int delta = rep.proposed.n_trains - rep.actual.n_trains;
    if (rep.proposed.avg_left_behind < rep.actual.avg_left_behind) ++improved;
    if (delta >= -1 && delta <= 3) ++delta_ok;
    rows += format(" %s:%d->%d/%.1f->%.1f%%", games[g].date.c_str(), rep.actual.n_trains,
                   rep.proposed.n_trains, 100.0 * rep.actual.avg_left_behind,
                   100.0 * rep.proposed.avg_left_behind);
  }
  return {improved == 8 && delta_ok == 8,
          format("avg %%LB reduced in %d/8, train delta in [-1,+3] in %d/8;", improved, delta_ok) +
              rows};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"boarding simulation matches per-rider oracle", criterion_1},
      {"capacity recovery on 50 synthetic scenarios", criterion_2},
      {"Sept-22 fixture clusters, capacity and proportions", criterion_3},
      {"stability interquartile range", criterion_4},
      {"optimal schedules and wait ordering", criterion_5},
      {"HDBSCAN invariances and recovery", criterion_6},
      {"event ridership spike recovery", criterion_7},
      {"prediction ordering, slope and importance", criterion_8},
      {"CLI end-to-end determinism", criterion_9},
      {"proposed vs actual schedules on eight games", criterion_10},
  };
  const int only = argc > 1 ? std::atoi(argv[1]) : 0;
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    if (only != 0 && static_cast<int>(i) + 1 != only) continue;
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += o.pass ? 0 : 1;
    std::printf("%s [%zu] %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first,
                o.detail.c_str());
    std::fflush(stdout);
  }
  return failures;
}
