#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace qacg {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitData = 2,
  kExitBackend = 3,
};

/// Runs one subcommand (ingest, generate, filter, export, train, eval,
/// baseline, fewshot, qg-eval, audit). `args` excludes the program name.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qacg
