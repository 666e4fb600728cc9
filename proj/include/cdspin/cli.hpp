#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace cdspin::cli {

inline constexpr const char* kToolName = "cd-spinsim";
inline constexpr const char* kVersion = "0.1.0";

enum ExitCode : int {
  kOk = 0,
  kUsageOrConfig = 2,
  kNumerical = 3,
  kNormDrift = 4,
};

/// Entry point of the command-line tool; returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Convenience overload for tests.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cdspin::cli
