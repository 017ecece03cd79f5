#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace mzeta {

enum ExitCode : int { kExitOk = 0, kExitCheckFailed = 1, kExitUsage = 2, kExitBudget = 3 };

// Runs the mzeta command line.  args excludes the program name.  Reports go
// to out (or the --output file), diagnostics and help to err/out as usual.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mzeta
