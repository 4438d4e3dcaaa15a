#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace rppg {

/// Exit statuses of the command-line tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitDataError = 1,
  kExitUsage = 2,
  kExitInsufficientData = 3,
  kExitIo = 4,
};

/// Subcommands: extract | synth | eval | psd | bench. `args` excludes the
/// program name.
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int cli_main(int argc, char** argv);

}  // namespace rppg
