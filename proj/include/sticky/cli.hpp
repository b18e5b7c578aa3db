// Command-line front end: kernel tables, path simulation, weighted
// estimates, validation suites and wetting runs.
#pragma once

#include <iosfwd>
#include <string>

namespace sticky {

inline constexpr const char* kVersion = "0.1.0";

/// Exit codes: 0 success, 1 a check failed, 2 usage or configuration error.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Shortest decimal string that parses back to exactly `v`.
std::string format_double(double v);

}  // namespace sticky
