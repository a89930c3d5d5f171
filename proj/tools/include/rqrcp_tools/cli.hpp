#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace rqrcp::tools {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitInput = 2,
  kExitNumerical = 3,
};

// Runs the command line `args` (without the program name). Results go to out, a single-line
// diagnostic goes to err on failure. Returns one of ExitCode.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rqrcp::tools
