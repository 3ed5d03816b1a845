#pragma once

#include "wiretap/cli/config.hpp"
#include "wiretap/cli/result_table.hpp"

namespace wiretap::cli {

enum ExitCode : int { kOk = 0, kConfigError = 1, kVerifyFailed = 2, kCapRefused = 3 };

struct CommandResult {
  ResultTable table;
  int exit_code = kOk;
};

CommandResult cmd_rate(const RunConfig& cfg);
CommandResult cmd_region(const RunConfig& cfg);
CommandResult cmd_simulate(const RunConfig& cfg);
CommandResult cmd_verify(const RunConfig& cfg);
CommandResult cmd_schedule(const RunConfig& cfg);

/// Dispatches on cfg.command and stamps the metadata header.
CommandResult run_command(const RunConfig& cfg);

/// run_command plus error mapping; writes CSV to cfg.output_path (or `out`)
/// and messages to `err`. Returns the process exit code.
int execute(const RunConfig& cfg, std::ostream& out, std::ostream& err);

}  // namespace wiretap::cli
