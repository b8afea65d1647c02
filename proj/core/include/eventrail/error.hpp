#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace eventrail {

enum class ErrorCode {
  MissingColumn,
  BadTimestamp,
  BadUseType,
  BadAttendance,
  BadField,
  BadNetwork,
  UnknownStation,
  NoCommonLine,
  EmptyBaseline,
  InsufficientBaseline,
  EmptyGameList,
  NotOnEventPath,
  TooFewPoints,
  InvalidSchedule,
  NegativeCapacity,
  LengthMismatch,
  EmptyArrivals,
  RankDeficient,
  NoSportingEvent,
  InvalidArgument,
  Io,
};

const char* to_string(ErrorCode code);

// Every failure raised by the library carries a code, and parse failures also
// carry the 1-based line number of the offending row.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message,
        std::optional<std::size_t> line = std::nullopt);

  ErrorCode code() const noexcept { return code_; }
  std::optional<std::size_t> line() const noexcept { return line_; }
  // what() without the code and line decoration.
  const std::string& message() const noexcept { return message_; }

 private:
  ErrorCode code_;
  std::optional<std::size_t> line_;
  std::string message_;
};

}  // namespace eventrail
