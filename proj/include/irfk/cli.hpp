#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace irfk {

/// Exit codes of the command-line tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitCheckFailed = 1,
  kExitConfig = 2,  ///< malformed config or inadmissible model
  kExitIo = 3,
};

/// Runs one subcommand (cov, sim, nfbm, tangent, verify, check-model).
/// `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace irfk
