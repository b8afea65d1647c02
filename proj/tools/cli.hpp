#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace eventrail::cli {

inline constexpr int kOk = 0;
inline constexpr int kDataError = 1;
inline constexpr int kUsageError = 2;

// args excludes the program name.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace eventrail::cli
