#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace crossdiff {

/// Exit codes of the command-line tool.
enum ExitCode : int { kExitOk = 0, kExitNoResult = 1, kExitUsage = 2, kExitNumerical = 3 };

/// Runs the tool on `args` (without the program name). Text goes to `out` and
/// diagnostics to `err`; files go to --out, else $CROSSDIFF_OUT, else ./crossdiff_out.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace crossdiff
