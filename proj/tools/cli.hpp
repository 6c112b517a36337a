#pragma once

#include <ostream>
#include <span>
#include <string>

namespace nvgates::cli {

enum ExitCode : int {
  kOk = 0,
  kRuntimeError = 1,
  kUsageError = 2,
};

// Runs one `nvgate` command. `args` excludes the program name.
int run_cli(std::span<const std::string> args, std::ostream& out, std::ostream& err);

}  // namespace nvgates::cli
