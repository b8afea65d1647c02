#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

// Timestamps are integer seconds of local civil time, counted from
// 1970-01-01 00:00 as if the local clock had no offset or DST. The fare data
// carries no zone information, so no zone arithmetic is done anywhere.
namespace eventrail {

using Seconds = std::int64_t;
using DayNumber = std::int64_t;  // days since 1970-01-01

inline constexpr Seconds kSecondsPerDay = 86400;
inline constexpr Seconds kSecondsPerMinute = 60;

struct CivilDate {
  int year = 1970;
  unsigned month = 1;
  unsigned day = 1;

  friend bool operator==(const CivilDate&, const CivilDate&) = default;
};

DayNumber to_day_number(const CivilDate& date);
CivilDate from_day_number(DayNumber day);

Seconds make_timestamp(const CivilDate& date, int hour, int minute, int second = 0);

// Floor division so that times before the epoch still land on the right day.
inline DayNumber day_of(Seconds t) {
  return t >= 0 ? t / kSecondsPerDay : -((-t + kSecondsPerDay - 1) / kSecondsPerDay);
}
inline Seconds midnight_of(DayNumber day) { return day * kSecondsPerDay; }

bool is_weekend(DayNumber day);

// Accepts YYYY/MM/DD, YYYY-MM-DD and MM/DD/YYYY with one- or two-digit parts.
std::optional<CivilDate> try_parse_date(std::string_view text);
// H:MM or H:MM:SS; the hour may exceed 23 for after-midnight service.
std::optional<Seconds> try_parse_clock(std::string_view text);
// A date, optionally followed by whitespace and a clock time.
std::optional<Seconds> try_parse_timestamp(std::string_view text);

std::string format_date(DayNumber day);                 // YYYY-MM-DD
std::string format_timestamp(Seconds t);                // YYYY/MM/DD HH:MM:SS
std::string format_clock(Seconds seconds_of_day);       // HH:MM:SS, HH may be >= 24

}  // namespace eventrail
