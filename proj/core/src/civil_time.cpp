#include "eventrail/civil_time.hpp"

#include <charconv>
#include <chrono>
#include <cstdio>
#include <vector>

namespace eventrail {

namespace chr = std::chrono;

DayNumber to_day_number(const CivilDate& date) {
  const chr::year_month_day ymd{chr::year{date.year}, chr::month{date.month},
                                chr::day{date.day}};
  return chr::sys_days{ymd}.time_since_epoch().count();
}

CivilDate from_day_number(DayNumber day) {
  const chr::year_month_day ymd{chr::sys_days{chr::days{day}}};
  return {static_cast<int>(ymd.year()), static_cast<unsigned>(ymd.month()),
          static_cast<unsigned>(ymd.day())};
}

Seconds make_timestamp(const CivilDate& date, int hour, int minute, int second) {
  return midnight_of(to_day_number(date)) + hour * 3600 + minute * 60 + second;
}

bool is_weekend(DayNumber day) {
  const chr::weekday wd{chr::sys_days{chr::days{day}}};
  return wd == chr::Saturday || wd == chr::Sunday;
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

// Splits on `sep` and parses every part as a non-negative integer.
std::optional<std::vector<std::pair<int, std::size_t>>> split_numbers(std::string_view s,
                                                                      char sep) {
  std::vector<std::pair<int, std::size_t>> out;
  std::size_t pos = 0;
  while (true) {
    const auto next = s.find(sep, pos);
    const auto part = s.substr(pos, next == std::string_view::npos ? s.npos : next - pos);
    if (part.empty()) return std::nullopt;
    int value = 0;
    const auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), value);
    if (ec != std::errc{} || ptr != part.data() + part.size()) return std::nullopt;
    out.emplace_back(value, part.size());
    if (next == std::string_view::npos) break;
    pos = next + 1;
  }
  return out;
}

bool valid_date(int y, int m, int d) {
  if (m < 1 || m > 12 || d < 1) return false;
  const chr::year_month_day ymd{chr::year{y}, chr::month{static_cast<unsigned>(m)},
                                chr::day{static_cast<unsigned>(d)}};
  return ymd.ok();
}

}  // namespace

std::optional<CivilDate> try_parse_date(std::string_view text) {
  text = trim(text);
  const char sep = text.find('-') != std::string_view::npos ? '-' : '/';
  const auto parts = split_numbers(text, sep);
  if (!parts || parts->size() != 3) return std::nullopt;
  int y = 0, m = 0, d = 0;
  if ((*parts)[0].second == 4) {
    y = (*parts)[0].first;
    m = (*parts)[1].first;
    d = (*parts)[2].first;
  } else if ((*parts)[2].second == 4 && sep == '/') {
    m = (*parts)[0].first;
    d = (*parts)[1].first;
    y = (*parts)[2].first;
  } else {
    return std::nullopt;
  }
  if (!valid_date(y, m, d)) return std::nullopt;
  return CivilDate{y, static_cast<unsigned>(m), static_cast<unsigned>(d)};
}

std::optional<Seconds> try_parse_clock(std::string_view text) {
  text = trim(text);
  const auto parts = split_numbers(text, ':');
  if (!parts || parts->size() < 2 || parts->size() > 3) return std::nullopt;
  const int h = (*parts)[0].first;
  const int m = (*parts)[1].first;
  const int s = parts->size() == 3 ? (*parts)[2].first : 0;
  if ((*parts)[1].second != 2 || m > 59 || s > 59) return std::nullopt;
  if (parts->size() == 3 && (*parts)[2].second != 2) return std::nullopt;
  return static_cast<Seconds>(h) * 3600 + m * 60 + s;
}

std::optional<Seconds> try_parse_timestamp(std::string_view text) {
  text = trim(text);
  const auto space = text.find_first_of(" T");
  const auto date = try_parse_date(text.substr(0, space));
  if (!date) return std::nullopt;
  Seconds clock = 0;
  if (space != std::string_view::npos) {
    const auto c = try_parse_clock(text.substr(space + 1));
    if (!c || *c >= kSecondsPerDay) return std::nullopt;
    clock = *c;
  }
  return midnight_of(to_day_number(*date)) + clock;
}

std::string format_date(DayNumber day) {
  const auto d = from_day_number(day);
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", d.year, d.month, d.day);
  return buf;
}

std::string format_timestamp(Seconds t) {
  const DayNumber day = day_of(t);
  const auto d = from_day_number(day);
  const Seconds rem = t - midnight_of(day);
  char buf[64];
  std::snprintf(buf, sizeof buf, "%04d/%02u/%02u %02lld:%02lld:%02lld", d.year, d.month, d.day,
                static_cast<long long>(rem / 3600), static_cast<long long>(rem / 60 % 60),
                static_cast<long long>(rem % 60));
  return buf;
}

std::string format_clock(Seconds seconds_of_day) {
  const bool negative = seconds_of_day < 0;
  const Seconds v = negative ? -seconds_of_day : seconds_of_day;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%s%02lld:%02lld:%02lld", negative ? "-" : "",
                static_cast<long long>(v / 3600), static_cast<long long>(v / 60 % 60),
                static_cast<long long>(v % 60));
  return buf;
}

}  // namespace eventrail
