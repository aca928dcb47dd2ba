#pragma once

#include "bilinfrac/config.hpp"

#include <ostream>
#include <string>

namespace bilinfrac {

/// Exit codes: 0 bounded (or success), 1 unbounded, 2 invalid input or out of hypothesis.
struct CommandResult {
  int exit_code = 0;
  std::string output;
  std::string diagnostic;
};

CommandResult cmd_classify(const RunConfig& cfg);
CommandResult cmd_reduce(const RunConfig& cfg);
CommandResult cmd_probe(const RunConfig& cfg);
CommandResult cmd_sweep(const RunConfig& cfg);
CommandResult cmd_norm(const RunConfig& cfg);

/// Dispatches on cfg.mode and turns expected errors into exit code 2.
CommandResult run_command(const RunConfig& cfg);

/// Full command line: parses flags, loads the config, runs it and writes the result to --out or `out`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace bilinfrac
