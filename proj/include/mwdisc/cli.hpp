#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace mwdisc {

/// Exit statuses of the command-line tool.
enum ExitStatus : int { kExitOk = 0, kExitViolated = 1, kExitUsage = 2 };

/// Runs one subcommand; `args` excludes the program name. The JSON report
/// goes to `out` unless --out names a file; diagnostics go to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mwdisc
