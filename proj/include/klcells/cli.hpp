#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace klcells::cli {

/// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kCheckFailed = 1;
inline constexpr int kUsage = 2;
inline constexpr int kInternal = 3;

/// Runs one command line (args[0] is the program name). The report goes to
/// `out` in one write; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace klcells::cli
