#pragma once

#include <cstddef>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace eventrail::csv {

// RFC-4180 style: fields may be quoted, quotes inside quoted fields are doubled.
// Quoted fields may not span lines.
std::vector<std::string> split_line(std::string_view line);
std::string escape(std::string_view field);
void write_row(std::ostream& out, std::span<const std::string> fields);

class Reader {
 public:
  // Reads the header row immediately; throws Error(MissingColumn) when the
  // source has no header.
  explicit Reader(std::istream& in);

  const std::vector<std::string>& header() const { return header_; }
  // Advances to the next non-blank row. Returns false at end of input.
  bool next();
  const std::vector<std::string>& row() const { return row_; }
  // 1-based physical line number of the current row.
  std::size_t line() const { return line_; }

  std::optional<std::size_t> find_column(std::string_view name) const;
  std::size_t column(std::string_view name) const;

 private:
  std::istream& in_;
  std::vector<std::string> header_;
  std::vector<std::string> row_;
  std::size_t line_ = 0;
};

}  // namespace eventrail::csv
