#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace weave {

enum ExitCode : int { kExitOk = 0, kExitConfig = 1, kExitAborted = 2 };

/// Entry point of the `weave` tool. `args` excludes the program name.
/// Subcommands: run, replay, stats, show.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace weave
