#include "eventrail/synthgen.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

#include "eventrail/error.hpp"
#include "eventrail/rng.hpp"
#include "eventrail/signatures.hpp"

namespace eventrail {
namespace {

constexpr std::uint64_t kEventStream = 0x5EED0E7E17ULL;

Seconds clock_field(const nlohmann::json& j, const char* key) {
  const auto text = j.at(key).get<std::string>();
  const auto t = try_parse_clock(text);
  if (!t) throw Error(ErrorCode::BadField, std::string("bad clock time for ") + key + ": " + text);
  return *t;
}

DayNumber date_field(const std::string& text) {
  const auto d = try_parse_date(text);
  if (!d) throw Error(ErrorCode::BadField, "bad date " + text);
  return to_day_number(*d);
}

std::vector<std::string> same_line_stations(const NetworkModel& net, const std::string& from) {
  std::vector<std::string> out;
  for (const auto& s : net.stations()) {
    if (s.id != from && !net.common_lines(from, s.id).empty()) out.push_back(s.id);
  }
  return out;
}

// Largest-remainder apportionment of `total` by weight; ties go to the
// earlier entry.
std::vector<std::int64_t> apportion(std::int64_t total, const std::vector<double>& weights) {
  const double sum = std::accumulate(weights.begin(), weights.end(), 0.0);
  std::vector<std::int64_t> out(weights.size(), 0);
  if (sum <= 0.0 || total <= 0) return out;
  std::vector<std::pair<double, std::size_t>> rem;
  std::int64_t given = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    const double exact = static_cast<double>(total) * weights[i] / sum;
    out[i] = static_cast<std::int64_t>(std::floor(exact));
    given += out[i];
    rem.emplace_back(-(exact - std::floor(exact)), i);
  }
  std::sort(rem.begin(), rem.end());
  for (std::size_t k = 0; given < total; ++k, ++given) ++out[rem[k % rem.size()].second];
  return out;
}

template <typename T>
void shuffle(std::vector<T>& v, Rng& rng) {
  for (std::size_t i = v.size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(i - 1)));
    std::swap(v[i - 1], v[j]);
  }
}

struct Rider {
  std::string card;
  std::string origin;
  std::string destination;  // empty: assigned from the destination pool
  Seconds entry = 0;
};

bool tap_less(const TapEvent& a, const TapEvent& b) {
  if (a.timestamp != b.timestamp) return a.timestamp < b.timestamp;
  if (a.card_id != b.card_id) return a.card_id < b.card_id;
  return a.use_type == UseType::Entry && b.use_type == UseType::Exit;
}

}  // namespace

ScenarioSpec ScenarioSpec::from_json(const nlohmann::json& doc,
                                     const std::filesystem::path& base_dir) {
  try {
    ScenarioSpec s;
    if (doc.value("format_version", 1) != 1) {
      throw Error(ErrorCode::BadField, "unsupported scenario format_version");
    }
    s.seed = doc.at("seed").get<std::uint64_t>();
    const auto& net = doc.at("network");
    s.network = net.is_string() ? NetworkModel::load(base_dir / net.get<std::string>())
                                : NetworkModel::from_json(net);
    const BinConfig bins;
    if (doc.contains("baseline")) {
      const auto& b = doc.at("baseline");
      for (const auto& d : b.value("days", nlohmann::json::array())) {
        s.baseline_days.push_back(date_field(d.get<std::string>()));
      }
      for (const auto& r : b.value("rates", nlohmann::json::array())) {
        RateSpec rate;
        rate.station = r.at("station").get<std::string>();
        if (!s.network.has_station(rate.station)) {
          throw Error(ErrorCode::UnknownStation, "rate for unknown station " + rate.station);
        }
        const auto& pb = r.at("per_bin");
        if (pb.is_number()) {
          rate.per_bin.assign(static_cast<std::size_t>(bins.bins_per_day()), pb.get<double>());
        } else {
          rate.per_bin = pb.get<std::vector<double>>();
        }
        if (rate.per_bin.size() != static_cast<std::size_t>(bins.bins_per_day())) {
          throw Error(ErrorCode::BadField, "per_bin needs one rate per 15-minute bin");
        }
        for (double v : rate.per_bin) {
          if (!(v >= 0.0)) throw Error(ErrorCode::BadField, "rates must be non-negative");
        }
        s.rates.push_back(std::move(rate));
      }
      s.max_wait = b.value("max_wait_seconds", Seconds{300});
    }
    if (doc.contains("event")) {
      const auto& e = doc.at("event");
      s.has_event = true;
      s.event_date = date_field(e.at("date").get<std::string>());
      s.event_station = e.at("station").get<std::string>();
      const auto h = parse_heading(e.value("heading", std::string("EAST")));
      if (!h) throw Error(ErrorCode::BadField, "bad heading");
      s.heading = *h;
      s.attendance = e.value("attendance", 1.0);
      s.reference_attendance = e.value("reference_attendance", 0.0);
      for (const auto& a : e.at("arrivals")) {
        StationArrivals sa;
        sa.station = a.at("station").get<std::string>();
        for (const auto& seg : a.at("segments")) {
          SegmentSpec sp{clock_field(seg, "from"), clock_field(seg, "to"),
                         seg.at("count").get<std::int64_t>()};
          if (sp.to <= sp.from || sp.count < 0) {
            throw Error(ErrorCode::BadField, "segment needs from < to and count >= 0");
          }
          sa.segments.push_back(sp);
        }
        s.arrivals.push_back(std::move(sa));
      }
      for (const auto& d : e.at("destinations")) {
        s.destinations.push_back({d.at("station").get<std::string>(), d.value("weight", 1.0)});
      }
      s.west_share = e.value("west_share", 0.0);
      s.west_destinations =
          e.value("west_destinations", std::vector<std::string>{});
    }
    if (doc.contains("ground_truth")) {
      const auto& g = doc.at("ground_truth");
      s.capacity = g.at("capacity").get<std::int64_t>();
      if (s.capacity < 1) throw Error(ErrorCode::BadField, "capacity must be >= 1");
      s.truth_stations = g.at("stations").get<std::vector<std::string>>();
      for (const auto& t : g.at("trains")) {
        s.trains.push_back({clock_field(t, "time"),
                            t.value("skips", std::vector<std::string>{})});
      }
      for (std::size_t i = 1; i < s.trains.size(); ++i) {
        if (s.trains[i].time <= s.trains[i - 1].time) {
          throw Error(ErrorCode::InvalidSchedule, "ground-truth trains must be increasing");
        }
      }
      s.after_headway = g.value("after_headway", Seconds{600});
    }
    s.exit_jitter = doc.value("exit_jitter", Seconds{0});
    if (s.has_event && (s.trains.empty() || s.truth_stations.empty() ||
                        s.truth_stations.back() != s.event_station)) {
      throw Error(ErrorCode::BadField,
                  "event scenarios need ground-truth trains ending at the event station");
    }
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::BadField, std::string("malformed scenario: ") + e.what());
  }
}

ScenarioSpec ScenarioSpec::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot read " + path.string());
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::BadField, path.string() + ": " + e.what());
  }
  return from_json(doc, path.parent_path());
}

std::vector<TapEvent> gen_baseline_day(const ScenarioSpec& spec, DayNumber date) {
  Rng rng(derive_seed(spec.seed, static_cast<std::uint64_t>(date)));
  const BinConfig bins;
  std::vector<TapEvent> taps;
  std::int64_t serial = 0;
  for (const auto& rate : spec.rates) {
    const auto dests = same_line_stations(spec.network, rate.station);
    if (dests.empty()) continue;
    for (int b = 0; b < bins.bins_per_day(); ++b) {
      const std::int64_t n = rng.poisson(rate.per_bin[static_cast<std::size_t>(b)]);
      const Seconds start = bin_start(date, b, bins);
      for (std::int64_t k = 0; k < n; ++k) {
        const Seconds entry = start + rng.uniform_int(0, bins.bin_width - 1);
        const auto& dest = dests[static_cast<std::size_t>(
            rng.uniform_int(0, static_cast<std::int64_t>(dests.size()) - 1))];
        const Seconds exit =
            entry + rng.uniform_int(0, spec.max_wait) + spec.network.travel_time(rate.station, dest);
        const std::string card = "B" + std::to_string(date) + "-" + std::to_string(serial++);
        taps.push_back({card, entry, UseType::Entry, rate.station});
        taps.push_back({card, exit, UseType::Exit, dest});
      }
    }
  }
  std::sort(taps.begin(), taps.end(), tap_less);
  return taps;
}

nlohmann::json GroundTruth::to_json() const {
  nlohmann::json trains = nlohmann::json::array();
  for (std::size_t i = 0; i < input.trains.size(); ++i) {
    nlohmann::json stops = nlohmann::json::object();
    nlohmann::json cells = nlohmann::json::array();
    for (std::size_t s = 0; s < input.stations.size(); ++s) {
      const auto& dep = input.trains[i].departures[s];
      stops[input.stations[s]] = dep ? nlohmann::json(format_timestamp(*dep)) : nlohmann::json();
      const SimCell& c = result.cells[i][s];
      cells.push_back({{"station", input.stations[s]},
                       {"served", c.served},
                       {"new_demand", c.new_demand},
                       {"total_demand", c.total_demand},
                       {"left_behind", c.left_behind},
                       {"proportion_of_total", c.proportion_of_total},
                       {"proportion_of_new", c.proportion_of_new}});
    }
    trains.push_back({{"train_index", i}, {"departures", std::move(stops)}, {"cells", std::move(cells)}});
  }
  nlohmann::json riders = nlohmann::json::array();
  for (std::size_t s = 0; s < cards.size(); ++s) {
    for (std::size_t k = 0; k < cards[s].size(); ++k) {
      riders.push_back({cards[s][k], input.stations[s], result.riders[s][k].train});
    }
  }
  return {{"report_version", 1},
          {"capacity", input.trains.empty() ? 0 : input.trains.front().capacity},
          {"stations", input.stations},
          {"event_riders", event_riders},
          {"destination_counts", destination_counts},
          {"trains", std::move(trains)},
          {"riders", std::move(riders)}};
}

EventDay gen_event_day(const ScenarioSpec& spec) {
  if (!spec.has_event) throw Error(ErrorCode::InvalidArgument, "scenario has no event");
  EventDay day;
  std::vector<TapEvent> baseline = gen_baseline_day(spec, spec.event_date);
  if (spec.attendance <= 0.0) {
    day.taps = std::move(baseline);
    return day;
  }
  const Seconds midnight = midnight_of(spec.event_date);
  const NetworkModel& net = spec.network;
  const std::string& ev = spec.event_station;
  Rng rng(derive_seed(spec.seed ^ kEventStream, static_cast<std::uint64_t>(spec.event_date)));

  // Event riders.
  const double scale =
      spec.reference_attendance > 0.0 ? spec.attendance / spec.reference_attendance : 1.0;
  std::vector<Rider> riders;
  Seconds window_from = 0, window_to = 0;
  bool have_window = false;
  for (const auto& sa : spec.arrivals) {
    for (const auto& seg : sa.segments) {
      const auto n = static_cast<std::int64_t>(std::llround(static_cast<double>(seg.count) * scale));
      for (std::int64_t k = 0; k < n; ++k) {
        riders.push_back({"", sa.station, "", midnight + rng.uniform_int(seg.from + 1, seg.to)});
      }
      window_from = have_window ? std::min(window_from, midnight + seg.from) : midnight + seg.from;
      window_to = have_window ? std::max(window_to, midnight + seg.to) : midnight + seg.to;
      have_window = true;
    }
  }
  std::vector<double> weights;
  for (const auto& d : spec.destinations) weights.push_back(d.weight);
  const auto counts = apportion(static_cast<std::int64_t>(riders.size()), weights);
  std::vector<std::string> pool;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    pool.insert(pool.end(), static_cast<std::size_t>(counts[i]), spec.destinations[i].station);
    day.truth.destination_counts[spec.destinations[i].station] = counts[i];
  }
  shuffle(pool, rng);
  for (std::size_t i = 0; i < riders.size(); ++i) {
    riders[i].destination = pool[i];
    riders[i].card = "E" + std::to_string(spec.event_date) + "-" + std::to_string(i);
    if (!net.passes_through(riders[i].origin, ev, riders[i].destination) ||
        riders[i].origin == riders[i].destination) {
      throw Error(ErrorCode::NotOnEventPath,
                  riders[i].origin + " -> " + riders[i].destination + " skips " + ev);
    }
  }
  day.truth.event_riders = static_cast<std::int64_t>(riders.size());

  // Baseline riders in the window heading through the event station take the
  // same trains; their original exit taps are replaced.
  std::map<std::string, std::size_t> exit_of;
  for (std::size_t i = 0; i < baseline.size(); ++i) {
    if (baseline[i].use_type == UseType::Exit) exit_of[baseline[i].card_id] = i;
  }
  std::vector<bool> drop(baseline.size(), false);
  for (const auto& tap : baseline) {
    if (tap.use_type != UseType::Entry || tap.timestamp <= window_from ||
        tap.timestamp > window_to) {
      continue;
    }
    if (std::find(spec.truth_stations.begin(), spec.truth_stations.end(), tap.station_id) ==
        spec.truth_stations.end()) {
      continue;
    }
    const std::size_t x = exit_of.at(tap.card_id);
    const std::string& dest = baseline[x].station_id;
    if (dest == tap.station_id || !net.passes_through(tap.station_id, ev, dest) || dest == ev ||
        net.heading(tap.station_id, dest) != spec.heading) {
      continue;
    }
    drop[x] = true;
    riders.push_back({tap.card_id, tap.station_id, dest, tap.timestamp});
  }

  // Ground-truth boarding.
  SimInput& input = day.truth.input;
  input.stations = spec.truth_stations;
  const std::size_t n_st = input.stations.size();
  std::vector<Seconds> offset(n_st);
  for (std::size_t s = 0; s < n_st; ++s) offset[s] = net.travel_time(input.stations[s], ev);
  auto add_train = [&](Seconds t_event, const std::vector<std::string>& skips) {
    ScheduledTrain tr;
    tr.capacity = spec.capacity;
    for (std::size_t s = 0; s < n_st; ++s) {
      const bool skip =
          std::find(skips.begin(), skips.end(), input.stations[s]) != skips.end();
      tr.departures.push_back(skip ? std::nullopt
                                   : std::optional<Seconds>(t_event - offset[s]));
    }
    input.trains.push_back(std::move(tr));
  };
  for (const auto& t : spec.trains) add_train(midnight + t.time, t.skips);

  std::vector<std::vector<std::size_t>> at(n_st);
  for (std::size_t i = 0; i < riders.size(); ++i) {
    const auto pos = std::find(input.stations.begin(), input.stations.end(), riders[i].origin);
    if (pos == input.stations.end()) {
      throw Error(ErrorCode::UnknownStation,
                  riders[i].origin + " is not a ground-truth boarding station");
    }
    at[static_cast<std::size_t>(pos - input.stations.begin())].push_back(i);
  }
  input.arrivals.assign(n_st, {});
  day.truth.cards.assign(n_st, {});
  Seconds last_arrival = 0;
  for (std::size_t s = 0; s < n_st; ++s) {
    std::stable_sort(at[s].begin(), at[s].end(), [&](std::size_t a, std::size_t b) {
      if (riders[a].entry != riders[b].entry) return riders[a].entry < riders[b].entry;
      return riders[a].card < riders[b].card;
    });
    for (std::size_t i : at[s]) {
      input.arrivals[s].push_back(riders[i].entry);
      day.truth.cards[s].push_back(riders[i].card);
      last_arrival = std::max(last_arrival, riders[i].entry + offset[s]);
    }
  }
  Seconds t = midnight + spec.trains.back().time;
  while (t < last_arrival) {
    t += spec.after_headway;
    add_train(t, {});
  }
  day.truth.result = simulate_boarding(input);
  while (day.truth.result.unserved > 0) {
    t += spec.after_headway;
    add_train(t, {});
    day.truth.result = simulate_boarding(input);
  }

  // Taps.
  std::vector<TapEvent> taps;
  for (std::size_t i = 0; i < baseline.size(); ++i) {
    if (!drop[i]) taps.push_back(baseline[i]);
  }
  for (std::size_t s = 0; s < n_st; ++s) {
    for (std::size_t k = 0; k < at[s].size(); ++k) {
      const Rider& r = riders[at[s][k]];
      const auto& outcome = day.truth.result.riders[s][k];
      const Seconds dep_event =
          *input.trains[static_cast<std::size_t>(outcome.train)].departures[s] + offset[s];
      Seconds exit = dep_event + net.travel_time(ev, r.destination);
      if (spec.exit_jitter > 0) exit += rng.uniform_int(-spec.exit_jitter, spec.exit_jitter);
      if (r.card[0] == 'E') taps.push_back({r.card, r.entry, UseType::Entry, r.origin});
      taps.push_back({r.card, exit, UseType::Exit, r.destination});
    }
  }

  // Westbound event riders ride uncongested trains.
  if (spec.west_share > 0.0 && !spec.west_destinations.empty()) {
    const auto n_west = static_cast<std::int64_t>(
        std::llround(spec.west_share * static_cast<double>(day.truth.event_riders)));
    for (std::int64_t k = 0; k < n_west; ++k) {
      const Seconds entry = rng.uniform_int(window_from + 1, window_to);
      const auto& dest = spec.west_destinations[static_cast<std::size_t>(rng.uniform_int(
          0, static_cast<std::int64_t>(spec.west_destinations.size()) - 1))];
      const std::string card = "W" + std::to_string(spec.event_date) + "-" + std::to_string(k);
      taps.push_back({card, entry, UseType::Entry, ev});
      taps.push_back({card, entry + rng.uniform_int(0, spec.max_wait) + net.travel_time(ev, dest),
                      UseType::Exit, dest});
    }
  }
  std::sort(taps.begin(), taps.end(), tap_less);
  day.taps = std::move(taps);
  return day;
}

Dataset generate(const ScenarioSpec& spec) {
  Dataset data;
  for (DayNumber d : spec.baseline_days) {
    if (spec.has_event && d == spec.event_date) continue;
    auto day = gen_baseline_day(spec, d);
    data.taps.insert(data.taps.end(), day.begin(), day.end());
  }
  if (spec.has_event) {
    EventDay ev = gen_event_day(spec);
    data.taps.insert(data.taps.end(), ev.taps.begin(), ev.taps.end());
    if (spec.attendance > 0.0) data.truth = std::move(ev.truth);
  }
  std::sort(data.taps.begin(), data.taps.end(), tap_less);
  return data;
}

}  // namespace eventrail
