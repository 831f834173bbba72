#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace collapseloc {

enum ExitCode : int { kExitOk = 0, kExitUsage = 1, kExitConfig = 2, kExitModel = 3 };

/// Runs the command line `args` (without the program name).
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace collapseloc
