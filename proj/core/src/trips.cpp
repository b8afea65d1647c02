#include "eventrail/trips.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <optional>

#include "eventrail/csv.hpp"
#include "eventrail/error.hpp"

namespace eventrail {

const char* to_string(AnomalyKind kind) {
  switch (kind) {
    case AnomalyKind::RepeatedEntry: return "REPEATED_ENTRY";
    case AnomalyKind::Timeout: return "TIMEOUT";
    case AnomalyKind::MissingEntry: return "MISSING_ENTRY";
    case AnomalyKind::MissingExit: return "MISSING_EXIT";
    case AnomalyKind::DuplicateTap: return "DUPLICATE_TAP";
  }
  return "UNKNOWN";
}

namespace {

Trip make_trip(const TapEvent& entry, const TapEvent& exit, unsigned flags) {
  Trip trip{entry.card_id, entry.station_id, entry.timestamp, exit.station_id, exit.timestamp,
            flags};
  if (trip.entry_station == trip.exit_station) trip.flags |= kSelfLoop;
  return trip;
}

Anomaly anomaly(AnomalyKind kind, const TapEvent& tap) {
  return {kind, tap.card_id, tap.timestamp, tap.station_id};
}

}  // namespace

ChainResult chain_trips(std::span<const TapEvent> taps, const ChainOptions& options) {
  std::vector<std::size_t> order(taps.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (taps[a].card_id != taps[b].card_id) return taps[a].card_id < taps[b].card_id;
    return taps[a].timestamp < taps[b].timestamp;
  });

  ChainResult result;
  const TapEvent* open = nullptr;
  const TapEvent* previous = nullptr;

  auto close_forced = [&](AnomalyKind why) {
    result.trips.push_back(make_trip(*open, *open, kForcedExit));
    result.anomalies.push_back(anomaly(why, *open));
    open = nullptr;
  };

  for (std::size_t k = 0; k < order.size(); ++k) {
    const TapEvent& tap = taps[order[k]];
    if (previous && previous->card_id != tap.card_id) {
      if (open) close_forced(AnomalyKind::MissingExit);
      previous = nullptr;
    }
    if (previous && previous->timestamp == tap.timestamp &&
        previous->use_type == tap.use_type && previous->station_id == tap.station_id) {
      result.anomalies.push_back(anomaly(AnomalyKind::DuplicateTap, tap));
    }

    if (tap.use_type == UseType::Entry) {
      if (open) close_forced(AnomalyKind::RepeatedEntry);
      open = &tap;
    } else if (open && tap.timestamp - open->timestamp <= options.max_trip_duration) {
      result.trips.push_back(make_trip(*open, tap, 0));
      open = nullptr;
    } else {
      if (open) close_forced(AnomalyKind::Timeout);
      result.trips.push_back(make_trip(tap, tap, kForcedEntry));
      result.anomalies.push_back(anomaly(AnomalyKind::MissingEntry, tap));
    }
    previous = &tap;
  }
  if (open) close_forced(AnomalyKind::MissingExit);
  return result;
}

namespace {

std::string flags_to_string(unsigned flags) {
  std::string out;
  auto add = [&](const char* name) {
    if (!out.empty()) out += '|';
    out += name;
  };
  if (flags & kForcedEntry) add("FORCED_ENTRY");
  if (flags & kForcedExit) add("FORCED_EXIT");
  if (flags & kSelfLoop) add("SELF_LOOP");
  return out;
}

bool parse_flags(const std::string& text, unsigned& flags) {
  flags = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto bar = text.find('|', pos);
    if (bar == std::string::npos) bar = text.size();
    const auto token = text.substr(pos, bar - pos);
    if (token == "FORCED_ENTRY") flags |= kForcedEntry;
    else if (token == "FORCED_EXIT") flags |= kForcedExit;
    else if (token == "SELF_LOOP") flags |= kSelfLoop;
    else if (!token.empty()) return false;
    pos = bar + 1;
  }
  return true;
}

}  // namespace

void write_trips(std::ostream& out, std::span<const Trip> trips) {
  out << "card_id,entry_station,entry_time,exit_station,exit_time,flags\n";
  for (const auto& t : trips) {
    const std::string fields[] = {t.card_id,
                                  t.entry_station,
                                  format_timestamp(t.entry_time),
                                  t.exit_station,
                                  format_timestamp(t.exit_time),
                                  flags_to_string(t.flags)};
    csv::write_row(out, fields);
  }
}

std::vector<Trip> parse_trips(std::istream& in) {
  csv::Reader reader(in);
  const std::size_t cols[] = {reader.column("card_id"),     reader.column("entry_station"),
                              reader.column("entry_time"),  reader.column("exit_station"),
                              reader.column("exit_time"),   reader.column("flags")};
  const auto width = *std::max_element(std::begin(cols), std::end(cols)) + 1;
  std::vector<Trip> trips;
  while (reader.next()) {
    auto row = reader.row();
    // A trailing empty flags field may be dropped by some writers.
    if (row.size() + 1 == width && cols[5] == width - 1) row.emplace_back();
    if (row.size() < width) throw Error(ErrorCode::BadField, "too few fields", reader.line());
    Trip t;
    t.card_id = row[cols[0]];
    t.entry_station = row[cols[1]];
    t.exit_station = row[cols[3]];
    const auto entry = try_parse_timestamp(row[cols[2]]);
    const auto exit = try_parse_timestamp(row[cols[4]]);
    if (!entry || !exit) throw Error(ErrorCode::BadTimestamp, "bad trip time", reader.line());
    t.entry_time = *entry;
    t.exit_time = *exit;
    if (!parse_flags(row[cols[5]], t.flags)) {
      throw Error(ErrorCode::BadField, "unknown flag in '" + row[cols[5]] + "'", reader.line());
    }
    trips.push_back(std::move(t));
  }
  return trips;
}

std::vector<Trip> read_trips(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  return parse_trips(in);
}

void write_anomalies(std::ostream& out, std::span<const Anomaly> anomalies) {
  out << "kind,card_id,timestamp,station_id\n";
  for (const auto& a : anomalies) {
    const std::string fields[] = {to_string(a.kind), a.card_id, format_timestamp(a.timestamp),
                                  a.station_id};
    csv::write_row(out, fields);
  }
}

}  // namespace eventrail
