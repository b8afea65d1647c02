#pragma once

#include <filesystem>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "eventrail/civil_time.hpp"

namespace eventrail {

enum class UseType { Entry, Exit };

// Wire spelling used by the fare-collection export: "Entry (Tag On)" and
// "Exit (Tag Off)". Parsing is case-insensitive and also accepts the bare
// words "Entry"/"Exit".
std::string_view to_wire(UseType use);

struct TapEvent {
  std::string card_id;
  Seconds timestamp = 0;
  UseType use_type = UseType::Entry;
  std::string station_id;

  friend bool operator==(const TapEvent&, const TapEvent&) = default;
};

// Columns: card_id,timestamp,use_type,station_id (any order, extra columns
// ignored). Timestamps are YYYY/MM/DD H:MM[:SS]. The first malformed row
// raises Error with its line number.
std::vector<TapEvent> parse_taps(std::istream& in);
std::vector<TapEvent> read_taps(const std::filesystem::path& path);
void write_taps(std::ostream& out, std::span<const TapEvent> taps);

}  // namespace eventrail
