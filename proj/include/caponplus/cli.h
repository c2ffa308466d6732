#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace caponplus {

/// Exit codes of the command-line front end.
enum ExitCode : int { kExitOk = 0, kExitConfig = 1, kExitTrials = 2 };

/// args excludes the program name, e.g. {"run", "cfg.json", "--threads", "4"}.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace caponplus
