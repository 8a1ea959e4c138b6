#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace coreinv::cli {

// Stable process exit codes.
enum ExitCode : int {
  kSuccess = 0,
  kCheckFailed = 1,
  kUsage = 2,
  kIndexViolation = 3,
  kCramerGate = 4,
};

// Runs the command line `args` (program name excluded). Data goes to `out`,
// diagnostics to `err`. Never throws.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace coreinv::cli
