#include "eventrail/csv.hpp"

#include <cctype>

#include "eventrail/error.hpp"

namespace eventrail::csv {

namespace {
std::string trim(std::string s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}
}  // namespace

std::vector<std::string> split_line(std::string_view line) {
  std::vector<std::string> fields;
  std::string current;
  bool quoted = false;
  bool was_quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          current += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        current += c;
      }
    } else if (c == '"') {
      quoted = true;
      was_quoted = true;
    } else if (c == ',') {
      fields.push_back(was_quoted ? current : trim(current));
      current.clear();
      was_quoted = false;
    } else {
      current += c;
    }
  }
  fields.push_back(was_quoted ? current : trim(current));
  return fields;
}

std::string escape(std::string_view field) {
  // Unquoted fields are trimmed on read, so edge whitespace needs quotes too.
  const bool edge_space =
      !field.empty() && (std::isspace(static_cast<unsigned char>(field.front())) ||
                         std::isspace(static_cast<unsigned char>(field.back())));
  if (!edge_space && field.find_first_of(",\"\n\r") == std::string_view::npos) {
    return std::string(field);
  }
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

void write_row(std::ostream& out, std::span<const std::string> fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out << ',';
    out << escape(fields[i]);
  }
  out << '\n';
}

Reader::Reader(std::istream& in) : in_(in) {
  std::string line;
  while (std::getline(in_, line)) {
    ++line_;
    if (trim(line).empty()) continue;
    // Strip a UTF-8 byte order mark.
    if (line.size() >= 3 && static_cast<unsigned char>(line[0]) == 0xEF &&
        static_cast<unsigned char>(line[1]) == 0xBB &&
        static_cast<unsigned char>(line[2]) == 0xBF) {
      line.erase(0, 3);
    }
    header_ = split_line(line);
    return;
  }
  throw Error(ErrorCode::MissingColumn, "input has no header row");
}

bool Reader::next() {
  std::string line;
  while (std::getline(in_, line)) {
    ++line_;
    if (trim(line).empty()) continue;
    row_ = split_line(line);
    return true;
  }
  return false;
}

std::optional<std::size_t> Reader::find_column(std::string_view name) const {
  for (std::size_t i = 0; i < header_.size(); ++i) {
    if (header_[i] == name) return i;
  }
  return std::nullopt;
}

std::size_t Reader::column(std::string_view name) const {
  if (auto idx = find_column(name)) return *idx;
  throw Error(ErrorCode::MissingColumn, "missing column '" + std::string(name) + "'");
}

}  // namespace eventrail::csv
