#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace liemax {

/// Exit codes of the command-line tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,
  kExitRejected = 2,
  kExitUsage = 64,
  kExitDomain = 65,
  kExitIntegration = 70,
};

/// Runs the `liemax` command line; `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace liemax
