#include "eventrail/events.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>

#include "eventrail/csv.hpp"
#include "eventrail/error.hpp"

namespace eventrail {

namespace {

bool all_digits(const std::string& s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); });
}

bool digits_and_commas(const std::string& s) {
  return !s.empty() && std::isdigit(static_cast<unsigned char>(s.front())) &&
         std::all_of(s.begin(), s.end(),
                     [](unsigned char c) { return std::isdigit(c) || c == ','; });
}

// Rejoins an unquoted "15,000" that the CSV split broke into "15" and "000".
void merge_thousands(std::vector<std::string>& row, std::size_t column, std::size_t expected) {
  while (row.size() > expected && column + 1 < row.size() && digits_and_commas(row[column]) &&
         row[column + 1].size() == 3 && all_digits(row[column + 1])) {
    row[column] += "," + row[column + 1];
    row.erase(row.begin() + static_cast<std::ptrdiff_t>(column) + 1);
  }
}

std::optional<std::int64_t> parse_count(std::string text) {
  text.erase(std::remove(text.begin(), text.end(), ','), text.end());
  std::int64_t value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) return std::nullopt;
  return value;
}

std::optional<double> parse_number(const std::string& text) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) return std::nullopt;
    return v;
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

}  // namespace

std::vector<EventRecord> parse_events(std::istream& in) {
  csv::Reader reader(in);
  const auto c_begin = reader.column("begin");
  const auto c_category = reader.column("category");
  const auto c_name = reader.column("name");
  const auto c_location = reader.column("location");
  const auto c_attendance = reader.column("attendance");
  const auto c_true = reader.find_column("true_attendance");
  const auto c_wpdiff = reader.find_column("wpdiff");
  const auto c_margin = reader.find_column("regularized_margin");
  const auto c_offset = reader.find_column("end_offset_minutes");
  const auto expected = reader.header().size();

  std::vector<EventRecord> events;
  while (reader.next()) {
    auto row = reader.row();
    merge_thousands(row, c_attendance, expected);
    if (c_true) merge_thousands(row, *c_true, expected);
    if (row.size() < c_attendance + 1) {
      throw Error(ErrorCode::BadField, "too few fields", reader.line());
    }
    row.resize(std::max(row.size(), expected));
    if (row.size() > expected) throw Error(ErrorCode::BadField, "too many fields", reader.line());

    EventRecord ev;
    const auto begin = try_parse_timestamp(row[c_begin]);
    if (!begin) {
      throw Error(ErrorCode::BadTimestamp, "cannot parse begin '" + row[c_begin] + "'",
                  reader.line());
    }
    ev.begin = *begin;
    ev.category = row[c_category];
    ev.name = row[c_name];
    ev.location = row[c_location];
    const auto attendance = parse_count(row[c_attendance]);
    if (!attendance || *attendance < 0) {
      throw Error(ErrorCode::BadAttendance, "bad attendance '" + row[c_attendance] + "'",
                  reader.line());
    }
    ev.attendance = *attendance;
    if (c_true && !row[*c_true].empty()) {
      const auto t = parse_count(row[*c_true]);
      if (!t || *t < 0) {
        throw Error(ErrorCode::BadAttendance, "bad true_attendance '" + row[*c_true] + "'",
                    reader.line());
      }
      ev.true_attendance = *t;
    }
    auto optional_number = [&](std::optional<std::size_t> col, const char* what)
        -> std::optional<double> {
      if (!col || row[*col].empty()) return std::nullopt;
      const auto v = parse_number(row[*col]);
      if (!v) {
        throw Error(ErrorCode::BadField, std::string("bad ") + what + " '" + row[*col] + "'",
                    reader.line());
      }
      return v;
    };
    ev.wpdiff = optional_number(c_wpdiff, "wpdiff");
    if (ev.wpdiff && (*ev.wpdiff < -1.0 || *ev.wpdiff > 1.0)) {
      throw Error(ErrorCode::BadField, "wpdiff outside [-1, 1]", reader.line());
    }
    ev.regularized_margin = optional_number(c_margin, "regularized_margin");
    ev.end_offset_minutes = optional_number(c_offset, "end_offset_minutes");
    events.push_back(std::move(ev));
  }
  return events;
}

std::vector<EventRecord> load_events(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  return parse_events(in);
}

void write_events(std::ostream& out, std::span<const EventRecord> events) {
  out << "begin,category,name,location,attendance,true_attendance,wpdiff,regularized_margin,"
         "end_offset_minutes\n";
  auto opt = [](const auto& v) -> std::string {
    if (!v) return {};
    if constexpr (std::is_same_v<std::decay_t<decltype(*v)>, double>) {
      return format_number(*v);
    } else {
      return std::to_string(*v);
    }
  };
  for (const auto& ev : events) {
    const std::string fields[] = {format_timestamp(ev.begin),
                                  ev.category,
                                  ev.name,
                                  ev.location,
                                  std::to_string(ev.attendance),
                                  opt(ev.true_attendance),
                                  opt(ev.wpdiff),
                                  opt(ev.regularized_margin),
                                  opt(ev.end_offset_minutes)};
    csv::write_row(out, fields);
  }
}

}  // namespace eventrail
