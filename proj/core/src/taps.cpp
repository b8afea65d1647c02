#include "eventrail/taps.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>

#include "eventrail/csv.hpp"
#include "eventrail/error.hpp"

namespace eventrail {

std::string_view to_wire(UseType use) {
  return use == UseType::Entry ? "Entry (Tag On)" : "Exit (Tag Off)";
}

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

bool parse_use_type(std::string_view text, UseType& out) {
  const auto l = lower(text);
  if (l == "entry (tag on)" || l == "entry") {
    out = UseType::Entry;
    return true;
  }
  if (l == "exit (tag off)" || l == "exit") {
    out = UseType::Exit;
    return true;
  }
  return false;
}

}  // namespace

std::vector<TapEvent> parse_taps(std::istream& in) {
  csv::Reader reader(in);
  const auto c_card = reader.column("card_id");
  const auto c_time = reader.column("timestamp");
  const auto c_use = reader.column("use_type");
  const auto c_station = reader.column("station_id");
  const auto width = std::max({c_card, c_time, c_use, c_station}) + 1;

  std::vector<TapEvent> taps;
  while (reader.next()) {
    const auto& row = reader.row();
    if (row.size() < width) {
      throw Error(ErrorCode::BadField, "expected at least " + std::to_string(width) + " fields",
                  reader.line());
    }
    TapEvent tap;
    tap.card_id = row[c_card];
    const auto t = try_parse_timestamp(row[c_time]);
    if (!t || *t < 0) {
      throw Error(ErrorCode::BadTimestamp, "cannot parse timestamp '" + row[c_time] + "'",
                  reader.line());
    }
    tap.timestamp = *t;
    if (!parse_use_type(row[c_use], tap.use_type)) {
      throw Error(ErrorCode::BadUseType, "unknown use_type '" + row[c_use] + "'", reader.line());
    }
    tap.station_id = row[c_station];
    if (tap.card_id.empty() || tap.station_id.empty()) {
      throw Error(ErrorCode::BadField, "empty card_id or station_id", reader.line());
    }
    taps.push_back(std::move(tap));
  }
  return taps;
}

std::vector<TapEvent> read_taps(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  return parse_taps(in);
}

void write_taps(std::ostream& out, std::span<const TapEvent> taps) {
  out << "card_id,timestamp,use_type,station_id\n";
  for (const auto& tap : taps) {
    const std::string fields[] = {tap.card_id, format_timestamp(tap.timestamp),
                                  std::string(to_wire(tap.use_type)), tap.station_id};
    csv::write_row(out, fields);
  }
}

}  // namespace eventrail
