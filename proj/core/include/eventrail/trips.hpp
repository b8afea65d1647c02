#pragma once

#include <filesystem>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "eventrail/taps.hpp"

namespace eventrail {

enum TripFlag : unsigned {
  kForcedEntry = 1u << 0,  // exit tap without a preceding entry
  kForcedExit = 1u << 1,   // entry never closed by an exit
  kSelfLoop = 1u << 2,     // entry_station == exit_station
};

struct Trip {
  std::string card_id;
  std::string entry_station;
  Seconds entry_time = 0;
  std::string exit_station;
  Seconds exit_time = 0;
  unsigned flags = 0;

  bool has(TripFlag flag) const { return (flags & flag) != 0; }
  friend bool operator==(const Trip&, const Trip&) = default;
};

enum class AnomalyKind {
  RepeatedEntry,  // an entry followed by another entry
  Timeout,        // exit more than max_trip_duration after the entry
  MissingEntry,   // exit with no open entry
  MissingExit,    // entry still open when the card's taps run out
  DuplicateTap,   // same card, second, station and use type as the previous tap
};

const char* to_string(AnomalyKind kind);

struct Anomaly {
  AnomalyKind kind;
  std::string card_id;
  Seconds timestamp = 0;
  std::string station_id;
};

struct ChainOptions {
  Seconds max_trip_duration = 4 * 3600;
};

struct ChainResult {
  std::vector<Trip> trips;
  std::vector<Anomaly> anomalies;
};

// Groups taps by card (stable, so same-second taps keep file order), then
// matches every entry with the card's next tap. Every tap ends up in exactly
// one trip: unmatched entries get a forced exit at the entry station and
// time, unmatched exits a forced entry at the exit station and time.
ChainResult chain_trips(std::span<const TapEvent> taps, const ChainOptions& options = {});

// card_id,entry_station,entry_time,exit_station,exit_time,flags
// flags is a '|'-separated subset of FORCED_ENTRY, FORCED_EXIT, SELF_LOOP.
void write_trips(std::ostream& out, std::span<const Trip> trips);
std::vector<Trip> parse_trips(std::istream& in);
std::vector<Trip> read_trips(const std::filesystem::path& path);

void write_anomalies(std::ostream& out, std::span<const Anomaly> anomalies);

}  // namespace eventrail
