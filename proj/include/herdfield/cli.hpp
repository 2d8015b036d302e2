#pragma once

#include <ostream>

#include "herdfield/config.hpp"

namespace herdfield {

/// Process exit statuses of the command-line tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitUnexpected = 1,
  kExitConfig = 2,
  kExitNonConvergence = 3,
  kExitIo = 4,
  kExitSolverFault = 5,
};

int exit_code_for(ErrorKind kind);

/// Executes one subcommand, writing its artifacts under config.out and a
/// human-readable summary to `log`. Errors are reported to `log` and
/// mapped to an ExitCode; nothing is thrown.
int run(Command command, const RunConfig& config, std::ostream& log);

}  // namespace herdfield
