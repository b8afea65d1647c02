#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "eventrail/civil_time.hpp"

namespace eventrail {

enum class Heading { East, West, North, South };

const char* to_string(Heading h);
std::optional<Heading> parse_heading(std::string_view text);
Heading opposite(Heading h);

struct Station {
  std::string id;
  std::string name;
  std::vector<std::string> lines;  // derived from line membership
  std::optional<int> parking_spots;
};

struct Line {
  std::string id;
  Heading forward = Heading::East;  // heading when moving to higher indices
  std::vector<std::string> stations;
  std::vector<Seconds> segment_seconds;  // size() == stations.size() - 1
};

// Rail network: stations, ordered lines, per-segment run times.
//
// Network file (JSON):
//   {
//     "format_version": 1,
//     "stations": [{"id": "...", "name": "...", "parking_spots": 120}, ...],
//     "lines": [{"id": "BLUE", "forward_heading": "EAST",
//                "stations": ["A", "B", ...], "segment_seconds": [120, ...]}],
//     "travel_time_overrides": [{"from": "A", "to": "B", "seconds": 130}]
//   }
// Travel times are symmetric unless a directed override is given.
class NetworkModel {
 public:
  NetworkModel() = default;
  NetworkModel(std::vector<Station> stations, std::vector<Line> lines,
               std::map<std::pair<std::string, std::string>, Seconds> overrides = {});

  static NetworkModel from_json(const nlohmann::json& doc);
  static NetworkModel load(const std::filesystem::path& path);
  nlohmann::json to_json() const;

  const std::vector<Station>& stations() const { return stations_; }
  const std::vector<Line>& lines() const { return lines_; }
  bool has_station(std::string_view id) const;
  const Station& station(std::string_view id) const;
  const Line& line(std::string_view id) const;

  // Shortest same-line run time. Throws UnknownStation / NoCommonLine.
  Seconds travel_time(std::string_view origin, std::string_view dest) const;
  // Lines containing both stations.
  std::vector<const Line*> common_lines(std::string_view a, std::string_view b) const;
  // Heading of travel from `origin` to `dest` along their first common line.
  Heading heading(std::string_view origin, std::string_view dest) const;
  // True when some line holds all three stations with `via` between origin
  // and dest (inclusive).
  bool passes_through(std::string_view origin, std::string_view via, std::string_view dest) const;
  // Index of `station` on `line`, or nullopt.
  std::optional<std::size_t> position(const Line& line, std::string_view station) const;

 private:
  void validate() const;
  std::size_t station_index(std::string_view id) const;

  std::vector<Station> stations_;
  std::vector<Line> lines_;
  std::map<std::pair<std::string, std::string>, Seconds> overrides_;
  std::map<std::string, std::size_t, std::less<>> index_;
};

}  // namespace eventrail
