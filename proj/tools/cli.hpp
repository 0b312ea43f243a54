#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace spl::cli {

/// Process exit codes of the `spl` tool.
enum ExitCode : int {
  kSuccess = 0,
  kCheckFailed = 1,
  kUsageOrIoError = 2,
  kNumericalFailure = 3,
};

/// Runs one command line (args[0] is the program name). Machine-readable
/// JSON goes to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace spl::cli
