#include "eventrail/network.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <limits>

#include <nlohmann/json.hpp>

#include "eventrail/error.hpp"

namespace eventrail {

const char* to_string(Heading h) {
  switch (h) {
    case Heading::East: return "EAST";
    case Heading::West: return "WEST";
    case Heading::North: return "NORTH";
    case Heading::South: return "SOUTH";
  }
  return "EAST";
}

std::optional<Heading> parse_heading(std::string_view text) {
  std::string up(text);
  std::transform(up.begin(), up.end(), up.begin(), [](unsigned char c) { return std::toupper(c); });
  if (up == "EAST") return Heading::East;
  if (up == "WEST") return Heading::West;
  if (up == "NORTH") return Heading::North;
  if (up == "SOUTH") return Heading::South;
  return std::nullopt;
}

Heading opposite(Heading h) {
  switch (h) {
    case Heading::East: return Heading::West;
    case Heading::West: return Heading::East;
    case Heading::North: return Heading::South;
    case Heading::South: return Heading::North;
  }
  return h;
}

NetworkModel::NetworkModel(std::vector<Station> stations, std::vector<Line> lines,
                           std::map<std::pair<std::string, std::string>, Seconds> overrides)
    : stations_(std::move(stations)), lines_(std::move(lines)), overrides_(std::move(overrides)) {
  for (std::size_t i = 0; i < stations_.size(); ++i) {
    if (stations_[i].name.empty()) stations_[i].name = stations_[i].id;
    stations_[i].lines.clear();
    if (!index_.emplace(stations_[i].id, i).second) {
      throw Error(ErrorCode::BadNetwork, "duplicate station '" + stations_[i].id + "'");
    }
  }
  validate();
  for (const auto& line : lines_) {
    for (const auto& s : line.stations) stations_[station_index(s)].lines.push_back(line.id);
  }
}

void NetworkModel::validate() const {
  for (const auto& line : lines_) {
    if (line.stations.size() < 2) {
      throw Error(ErrorCode::BadNetwork, "line '" + line.id + "' needs at least two stations");
    }
    if (line.segment_seconds.size() + 1 != line.stations.size()) {
      throw Error(ErrorCode::BadNetwork,
                  "line '" + line.id + "' needs one segment time per consecutive station pair");
    }
    for (const auto& s : line.stations) {
      if (!index_.count(s)) {
        throw Error(ErrorCode::BadNetwork,
                    "line '" + line.id + "' references unknown station '" + s + "'");
      }
    }
    for (Seconds seg : line.segment_seconds) {
      if (seg <= 0) {
        throw Error(ErrorCode::BadNetwork, "line '" + line.id + "' has a non-positive segment");
      }
    }
  }
  for (const auto& [key, seconds] : overrides_) {
    if (!index_.count(key.first) || !index_.count(key.second)) {
      throw Error(ErrorCode::BadNetwork, "override references an unknown station");
    }
    if (seconds < 0) throw Error(ErrorCode::BadNetwork, "negative override");
  }
}

std::size_t NetworkModel::station_index(std::string_view id) const {
  const auto it = index_.find(id);
  if (it == index_.end()) {
    throw Error(ErrorCode::UnknownStation, "unknown station '" + std::string(id) + "'");
  }
  return it->second;
}

bool NetworkModel::has_station(std::string_view id) const { return index_.count(id) > 0; }

const Station& NetworkModel::station(std::string_view id) const {
  return stations_[station_index(id)];
}

const Line& NetworkModel::line(std::string_view id) const {
  for (const auto& l : lines_) {
    if (l.id == id) return l;
  }
  throw Error(ErrorCode::BadNetwork, "unknown line '" + std::string(id) + "'");
}

std::optional<std::size_t> NetworkModel::position(const Line& line,
                                                  std::string_view station) const {
  const auto it = std::find(line.stations.begin(), line.stations.end(), station);
  if (it == line.stations.end()) return std::nullopt;
  return static_cast<std::size_t>(it - line.stations.begin());
}

std::vector<const Line*> NetworkModel::common_lines(std::string_view a, std::string_view b) const {
  station_index(a);
  station_index(b);
  std::vector<const Line*> out;
  for (const auto& line : lines_) {
    if (position(line, a) && position(line, b)) out.push_back(&line);
  }
  return out;
}

Seconds NetworkModel::travel_time(std::string_view origin, std::string_view dest) const {
  station_index(origin);
  station_index(dest);
  if (origin == dest) return 0;
  if (const auto it = overrides_.find({std::string(origin), std::string(dest)});
      it != overrides_.end()) {
    return it->second;
  }
  Seconds best = std::numeric_limits<Seconds>::max();
  for (const Line* line : common_lines(origin, dest)) {
    auto a = *position(*line, origin);
    auto b = *position(*line, dest);
    if (a > b) std::swap(a, b);
    Seconds sum = 0;
    for (auto k = a; k < b; ++k) sum += line->segment_seconds[k];
    best = std::min(best, sum);
  }
  if (best == std::numeric_limits<Seconds>::max()) {
    throw Error(ErrorCode::NoCommonLine,
                "no common line for '" + std::string(origin) + "' and '" + std::string(dest) + "'");
  }
  return best;
}

Heading NetworkModel::heading(std::string_view origin, std::string_view dest) const {
  const auto lines = common_lines(origin, dest);
  if (lines.empty()) {
    throw Error(ErrorCode::NoCommonLine,
                "no common line for '" + std::string(origin) + "' and '" + std::string(dest) + "'");
  }
  const Line& line = *lines.front();
  return *position(line, dest) >= *position(line, origin) ? line.forward : opposite(line.forward);
}

bool NetworkModel::passes_through(std::string_view origin, std::string_view via,
                                  std::string_view dest) const {
  station_index(origin);
  station_index(via);
  station_index(dest);
  for (const auto& line : lines_) {
    const auto o = position(line, origin);
    const auto v = position(line, via);
    const auto d = position(line, dest);
    if (!o || !v || !d) continue;
    if ((*o <= *v && *v <= *d) || (*d <= *v && *v <= *o)) return true;
  }
  return false;
}

NetworkModel NetworkModel::from_json(const nlohmann::json& doc) {
  try {
    if (doc.value("format_version", 1) != 1) {
      throw Error(ErrorCode::BadNetwork, "unsupported network format_version");
    }
    std::vector<Station> stations;
    for (const auto& s : doc.at("stations")) {
      Station st;
      st.id = s.at("id").get<std::string>();
      st.name = s.value("name", st.id);
      if (s.contains("parking_spots") && !s.at("parking_spots").is_null()) {
        const int spots = s.at("parking_spots").get<int>();
        if (spots < 0) throw Error(ErrorCode::BadNetwork, "negative parking_spots for " + st.id);
        st.parking_spots = spots;
      }
      stations.push_back(std::move(st));
    }
    std::vector<Line> lines;
    for (const auto& l : doc.at("lines")) {
      Line line;
      line.id = l.at("id").get<std::string>();
      const auto heading = parse_heading(l.value("forward_heading", std::string("EAST")));
      if (!heading) throw Error(ErrorCode::BadNetwork, "bad forward_heading on " + line.id);
      line.forward = *heading;
      line.stations = l.at("stations").get<std::vector<std::string>>();
      line.segment_seconds = l.at("segment_seconds").get<std::vector<Seconds>>();
      lines.push_back(std::move(line));
    }
    std::map<std::pair<std::string, std::string>, Seconds> overrides;
    if (doc.contains("travel_time_overrides")) {
      for (const auto& o : doc.at("travel_time_overrides")) {
        overrides[{o.at("from").get<std::string>(), o.at("to").get<std::string>()}] =
            o.at("seconds").get<Seconds>();
      }
    }
    return NetworkModel(std::move(stations), std::move(lines), std::move(overrides));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::BadNetwork, e.what());
  }
}

NetworkModel NetworkModel::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::BadNetwork, path.string() + ": " + e.what());
  }
  return from_json(doc);
}

nlohmann::json NetworkModel::to_json() const {
  nlohmann::json doc;
  doc["format_version"] = 1;
  doc["stations"] = nlohmann::json::array();
  for (const auto& s : stations_) {
    nlohmann::json js{{"id", s.id}, {"name", s.name}};
    if (s.parking_spots) js["parking_spots"] = *s.parking_spots;
    doc["stations"].push_back(js);
  }
  doc["lines"] = nlohmann::json::array();
  for (const auto& l : lines_) {
    doc["lines"].push_back({{"id", l.id},
                            {"forward_heading", to_string(l.forward)},
                            {"stations", l.stations},
                            {"segment_seconds", l.segment_seconds}});
  }
  if (!overrides_.empty()) {
    doc["travel_time_overrides"] = nlohmann::json::array();
    for (const auto& [key, seconds] : overrides_) {
      doc["travel_time_overrides"].push_back(
          {{"from", key.first}, {"to", key.second}, {"seconds", seconds}});
    }
  }
  return doc;
}

}  // namespace eventrail
