#include "eventrail/features.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <set>

#include <nlohmann/json.hpp>

#include "eventrail/csv.hpp"
#include "eventrail/error.hpp"

namespace eventrail {
namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

struct GroupSpec {
  const char* name;
  bool categorical;
};

constexpr GroupSpec kGroups[] = {
    {"category", true},       {"location", true},      {"attendance", false},
    {"wpdiff", false},        {"regularized_margin", false}, {"category2", true},
    {"location2", true},      {"attendance2", false},  {"time_difference", false},
    {"two_event", false},     {"week", false},         {"month", true},
};

// Shortest text that parses back to the same double.
std::string num(double v) {
  char buf[40];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

}  // namespace

const char* to_string(Target t) { return t == Target::PostEvent ? "post_event" : "whole_day"; }

Target parse_target(std::string_view text) {
  if (text == "post_event") return Target::PostEvent;
  if (text == "whole_day") return Target::WholeDay;
  throw Error(ErrorCode::InvalidArgument, "unknown target '" + std::string(text) + "'");
}

double target_value(const FeatureRow& row, Target t) {
  return t == Target::PostEvent ? row.target_post_event : row.target_whole_day;
}

bool is_sporting(std::string_view category) {
  const std::string c = lower(category);
  return c.find("basketball") != std::string::npos || c.find("football") != std::string::npos ||
         c.find("soccer") != std::string::npos;
}

std::pair<int, int> post_event_window(std::string_view category) {
  const std::string c = lower(category);
  if (c.find("basketball") != std::string::npos) return {75, 195};
  if (c.find("football") != std::string::npos) return {30, 420};
  if (c.find("soccer") != std::string::npos) return {60, 300};
  throw Error(ErrorCode::InvalidArgument,
              "no post-event window for category '" + std::string(category) + "'");
}

RidershipTargets event_targets(const StationSignature& signature,
                               std::span<const double> event_day_counts, Seconds begin,
                               std::string_view category) {
  const auto [from, to] = post_event_window(category);
  const BinIndex day = assign_bin(begin, signature.bins);
  const auto first = assign_bin(begin + from * 60, signature.bins);
  const auto last = assign_bin(begin + to * 60 - 1, signature.bins);
  const int n = signature.bins.bins_per_day();
  // Windows running past the end of the service day are cut at its end.
  const int first_bin = first.service_day == day.service_day ? first.bin : n;
  const int last_bin = last.service_day == day.service_day ? last.bin : n - 1;
  RidershipTargets t;
  t.post_event = ridership_increment(signature, event_day_counts, first_bin, last_bin);
  t.whole_day = ridership_increment(signature, event_day_counts, 0, n - 1);
  return t;
}

std::vector<FeatureRow> build_feature_rows(std::span<const EventRecord> events,
                                           const std::map<DayNumber, RidershipTargets>& targets) {
  std::map<DayNumber, std::vector<const EventRecord*>> by_day;
  for (const auto& e : events) by_day[day_of(e.begin)].push_back(&e);

  std::vector<FeatureRow> rows;
  for (const auto& [day, target] : targets) {
    const auto it = by_day.find(day);
    const EventRecord* first = nullptr;
    if (it != by_day.end()) {
      for (const EventRecord* e : it->second) {
        if (is_sporting(e->category) && (!first || e->begin > first->begin)) first = e;
      }
    }
    if (!first) {
      throw Error(ErrorCode::NoSportingEvent, "no sporting event on " + format_date(day));
    }
    const EventRecord* second = nullptr;
    for (const EventRecord* e : it->second) {
      if (e != first && (!second || e->begin > second->begin)) second = e;
    }

    FeatureRow row;
    row.date = day;
    row.category = first->category;
    row.location = first->location;
    row.attendance = static_cast<double>(first->effective_attendance());
    row.wpdiff = first->wpdiff.value_or(0.0);
    row.regularized_margin = first->regularized_margin.value_or(0.0);
    if (second) {
      row.two_event = true;
      row.category2 = second->category;
      row.location2 = second->location;
      row.attendance2 = static_cast<double>(second->effective_attendance());
      row.time_difference =
          static_cast<double>(std::abs(first->begin - second->begin)) / 60.0;
    }
    row.week = is_weekend(day);
    row.month = static_cast<int>(from_day_number(day).month);
    row.target_post_event = target.post_event;
    row.target_whole_day = target.whole_day;
    rows.push_back(std::move(row));
  }
  return rows;
}

double numeric_feature(const FeatureRow& row, std::string_view name) {
  if (name == "attendance") return row.attendance;
  if (name == "wpdiff") return row.wpdiff;
  if (name == "regularized_margin") return row.regularized_margin;
  if (name == "attendance2") return row.attendance2;
  if (name == "time_difference") return row.time_difference;
  if (name == "two_event") return row.two_event ? 1.0 : 0.0;
  if (name == "week") return row.week ? 1.0 : 0.0;
  if (name == "month") return row.month;
  throw Error(ErrorCode::InvalidArgument, "'" + std::string(name) + "' is not a numeric feature");
}

std::string categorical_feature(const FeatureRow& row, std::string_view name) {
  if (name == "category") return row.category;
  if (name == "location") return row.location;
  if (name == "category2") return row.category2;
  if (name == "location2") return row.location2;
  if (name == "month") return std::to_string(row.month);
  throw Error(ErrorCode::InvalidArgument,
              "'" + std::string(name) + "' is not a categorical feature");
}

void write_feature_rows_csv(std::ostream& out, std::span<const FeatureRow> rows) {
  out << "date,category,location,attendance,wpdiff,regularized_margin,category2,location2,"
         "attendance2,time_difference,two_event,week,month,target_post_event,target_whole_day\n";
  for (const auto& r : rows) {
    const std::string fields[] = {format_date(r.date),
                                  r.category,
                                  r.location,
                                  num(r.attendance),
                                  num(r.wpdiff),
                                  num(r.regularized_margin),
                                  r.category2,
                                  r.location2,
                                  num(r.attendance2),
                                  num(r.time_difference),
                                  r.two_event ? "1" : "0",
                                  r.week ? "1" : "0",
                                  std::to_string(r.month),
                                  num(r.target_post_event),
                                  num(r.target_whole_day)};
    csv::write_row(out, fields);
  }
}

std::vector<FeatureRow> parse_feature_rows(std::istream& in) {
  csv::Reader reader(in);
  const char* names[] = {"date",       "category",        "location",   "attendance",
                         "wpdiff",     "regularized_margin", "category2", "location2",
                         "attendance2", "time_difference", "two_event",  "week",
                         "month",      "target_post_event", "target_whole_day"};
  std::vector<std::size_t> col;
  for (const char* n : names) col.push_back(reader.column(n));
  std::vector<FeatureRow> rows;
  while (reader.next()) {
    const auto& f = reader.row();
    auto field = [&](std::size_t i) -> const std::string& {
      if (col[i] >= f.size()) {
        throw Error(ErrorCode::BadField, std::string("missing ") + names[i], reader.line());
      }
      return f[col[i]];
    };
    auto number = [&](std::size_t i) {
      try {
        std::size_t used = 0;
        const double v = std::stod(field(i), &used);
        if (used != field(i).size()) throw std::invalid_argument("trailing");
        return v;
      } catch (const std::logic_error&) {
        throw Error(ErrorCode::BadField, std::string("bad ") + names[i], reader.line());
      }
    };
    FeatureRow r;
    const auto date = try_parse_date(field(0));
    if (!date) throw Error(ErrorCode::BadTimestamp, "bad date", reader.line());
    r.date = to_day_number(*date);
    r.category = field(1);
    r.location = field(2);
    r.attendance = number(3);
    r.wpdiff = number(4);
    r.regularized_margin = number(5);
    r.category2 = field(6);
    r.location2 = field(7);
    r.attendance2 = number(8);
    r.time_difference = number(9);
    r.two_event = number(10) != 0.0;
    r.week = number(11) != 0.0;
    r.month = static_cast<int>(number(12));
    r.target_post_event = number(13);
    r.target_whole_day = number(14);
    if (r.attendance < 0 || r.attendance2 < 0) {
      throw Error(ErrorCode::BadAttendance, "negative attendance", reader.line());
    }
    rows.push_back(std::move(r));
  }
  return rows;
}

FeatureEncoder FeatureEncoder::fit(std::span<const FeatureRow> rows) {
  FeatureEncoder enc;
  for (const auto& spec : kGroups) {
    Group g;
    g.name = spec.name;
    g.categorical = spec.categorical;
    g.first_column = enc.width_;
    if (g.categorical) {
      std::set<std::string> levels;
      for (const auto& r : rows) levels.insert(categorical_feature(r, g.name));
      g.levels.assign(levels.begin(), levels.end());
      g.width = g.levels.size();
    }
    enc.width_ += g.width;
    enc.groups_.push_back(std::move(g));
  }
  return enc;
}

std::vector<std::string> FeatureEncoder::column_names() const {
  std::vector<std::string> names;
  for (const auto& g : groups_) {
    if (!g.categorical) {
      names.push_back(g.name);
      continue;
    }
    for (const auto& level : g.levels) names.push_back(g.name + "=" + level);
  }
  return names;
}

std::vector<double> FeatureEncoder::transform(const FeatureRow& row) const {
  std::vector<double> x(width_, 0.0);
  for (const auto& g : groups_) {
    if (!g.categorical) {
      x[g.first_column] = numeric_feature(row, g.name);
      continue;
    }
    const std::string v = categorical_feature(row, g.name);
    const auto it = std::lower_bound(g.levels.begin(), g.levels.end(), v);
    if (it != g.levels.end() && *it == v) {
      x[g.first_column + static_cast<std::size_t>(it - g.levels.begin())] = 1.0;
    }
  }
  return x;
}

std::vector<std::vector<double>> FeatureEncoder::transform(std::span<const FeatureRow> rows) const {
  std::vector<std::vector<double>> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back(transform(r));
  return out;
}

nlohmann::json FeatureEncoder::to_json() const {
  nlohmann::json groups = nlohmann::json::array();
  for (const auto& g : groups_) {
    nlohmann::json j{{"name", g.name}, {"categorical", g.categorical}};
    if (g.categorical) j["levels"] = g.levels;
    groups.push_back(std::move(j));
  }
  return {{"groups", std::move(groups)}};
}

FeatureEncoder FeatureEncoder::from_json(const nlohmann::json& doc) {
  FeatureEncoder enc;
  for (const auto& j : doc.at("groups")) {
    Group g;
    g.name = j.at("name").get<std::string>();
    g.categorical = j.at("categorical").get<bool>();
    g.first_column = enc.width_;
    if (g.categorical) {
      g.levels = j.at("levels").get<std::vector<std::string>>();
      g.width = g.levels.size();
    }
    enc.width_ += g.width;
    enc.groups_.push_back(std::move(g));
  }
  return enc;
}

}  // namespace eventrail
