#pragma once

#include <cstdint>
#include <filesystem>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "eventrail/civil_time.hpp"

namespace eventrail {

struct EventRecord {
  Seconds begin = 0;
  std::string category;
  std::string name;
  std::string location;
  std::int64_t attendance = 0;
  std::optional<std::int64_t> true_attendance;
  std::optional<double> wpdiff;              // home minus away win share, [-1, 1]
  std::optional<double> regularized_margin;  // negative when the home team won
  std::optional<double> end_offset_minutes;  // delay of the real end vs. the usual game length

  // true_attendance when known, else the announced attendance.
  std::int64_t effective_attendance() const { return true_attendance.value_or(attendance); }
};

// begin,category,name,location,attendance[,true_attendance,wpdiff,regularized_margin,end_offset_minutes]
// `begin` accepts MM/DD/YYYY HH:MM:SS as well as the YYYY/MM/DD forms.
// Attendance may carry thousands separators ("15,000"), quoted or not.
std::vector<EventRecord> parse_events(std::istream& in);
std::vector<EventRecord> load_events(const std::filesystem::path& path);
void write_events(std::ostream& out, std::span<const EventRecord> events);

}  // namespace eventrail
