#include "eventrail/error.hpp"

namespace eventrail {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::MissingColumn: return "MissingColumn";
    case ErrorCode::BadTimestamp: return "BadTimestamp";
    case ErrorCode::BadUseType: return "BadUseType";
    case ErrorCode::BadAttendance: return "BadAttendance";
    case ErrorCode::BadField: return "BadField";
    case ErrorCode::BadNetwork: return "BadNetwork";
    case ErrorCode::UnknownStation: return "UnknownStation";
    case ErrorCode::NoCommonLine: return "NoCommonLine";
    case ErrorCode::EmptyBaseline: return "EmptyBaseline";
    case ErrorCode::InsufficientBaseline: return "InsufficientBaseline";
    case ErrorCode::EmptyGameList: return "EmptyGameList";
    case ErrorCode::NotOnEventPath: return "NotOnEventPath";
    case ErrorCode::TooFewPoints: return "TooFewPoints";
    case ErrorCode::InvalidSchedule: return "InvalidSchedule";
    case ErrorCode::NegativeCapacity: return "NegativeCapacity";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::EmptyArrivals: return "EmptyArrivals";
    case ErrorCode::RankDeficient: return "RankDeficient";
    case ErrorCode::NoSportingEvent: return "NoSportingEvent";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

namespace {
std::string decorate(ErrorCode code, const std::string& message,
                     std::optional<std::size_t> line) {
  std::string out = to_string(code);
  if (line) out += " (line " + std::to_string(*line) + ")";
  out += ": " + message;
  return out;
}
}  // namespace

Error::Error(ErrorCode code, const std::string& message,
             std::optional<std::size_t> line)
    : std::runtime_error(decorate(code, message, line)), code_(code), line_(line), message_(message) {}

}  // namespace eventrail
