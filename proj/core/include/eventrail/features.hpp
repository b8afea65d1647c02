#pragma once

#include <cstddef>
#include <istream>
#include <map>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "eventrail/events.hpp"
#include "eventrail/signatures.hpp"

namespace eventrail {

inline constexpr const char* kNoCategory = "NONE";
inline constexpr const char* kNoLocation = "No Location";

struct FeatureRow {
  DayNumber date = 0;
  std::string category;
  std::string location;
  double attendance = 0.0;
  double wpdiff = 0.0;
  double regularized_margin = 0.0;
  std::string category2 = kNoCategory;
  std::string location2 = kNoLocation;
  double attendance2 = 0.0;
  double time_difference = 0.0;  // minutes between the two starts
  bool two_event = false;
  bool week = false;  // Saturday or Sunday
  int month = 1;
  double target_post_event = 0.0;
  double target_whole_day = 0.0;
};

enum class Target { PostEvent, WholeDay };
const char* to_string(Target t);
Target parse_target(std::string_view text);
double target_value(const FeatureRow& row, Target t);

// Basketball, football and soccer count as sporting events.
bool is_sporting(std::string_view category);
// Minutes after the start that count as post-event ridership:
// basketball 75-195, football 30-420, soccer 60-300. Throws InvalidArgument.
std::pair<int, int> post_event_window(std::string_view category);

struct RidershipTargets {
  double post_event = 0.0;
  double whole_day = 0.0;
};

// Increments over the signature for one event day at the event station.
RidershipTargets event_targets(const StationSignature& signature,
                               std::span<const double> event_day_counts, Seconds begin,
                               std::string_view category);

// One row per day in `targets`. The sporting event with the latest start is
// Event 1; the latest-starting remaining event, if any, is Event 2; further
// events are ignored. Throws NoSportingEvent for a target day without one.
std::vector<FeatureRow> build_feature_rows(std::span<const EventRecord> events,
                                           const std::map<DayNumber, RidershipTargets>& targets);

void write_feature_rows_csv(std::ostream& out, std::span<const FeatureRow> rows);
std::vector<FeatureRow> parse_feature_rows(std::istream& in);

// One-hot encoding. Every original attribute is a group of one or more
// columns; categorical levels are sorted so the layout is deterministic.
class FeatureEncoder {
 public:
  struct Group {
    std::string name;
    bool categorical = false;
    std::vector<std::string> levels;  // categorical only
    std::size_t first_column = 0;
    std::size_t width = 1;
  };

  static FeatureEncoder fit(std::span<const FeatureRow> rows);

  std::size_t width() const { return width_; }
  const std::vector<Group>& groups() const { return groups_; }
  std::vector<std::string> column_names() const;
  // Unseen levels encode as all zeros.
  std::vector<double> transform(const FeatureRow& row) const;
  std::vector<std::vector<double>> transform(std::span<const FeatureRow> rows) const;

  nlohmann::json to_json() const;
  static FeatureEncoder from_json(const nlohmann::json& doc);

 private:
  std::vector<Group> groups_;
  std::size_t width_ = 0;
};

// Group names: category, location, attendance, wpdiff, regularized_margin,
// category2, location2, attendance2, time_difference, two_event, week, month.
double numeric_feature(const FeatureRow& row, std::string_view name);
std::string categorical_feature(const FeatureRow& row, std::string_view name);

}  // namespace eventrail
