#pragma once

namespace gdd {

// Exit codes of the command-line front end.
enum ExitCode : int {
  exit_ok = 0,
  exit_truncated = 1,   // a solver stopped at its time limit
  exit_usage = 2,       // bad flags or values
  exit_verify_failed = 3,
  exit_input_error = 4, // unreadable or invalid model
};

// Subcommands solve, generate, compare and verify.
int cli_main(int argc, const char* const* argv);

}
