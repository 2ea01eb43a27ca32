#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "cachelab/analysis.hpp"

namespace cachelab {

/// Process exit codes of the command-line tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitVerificationFailed = 1,
  kExitUsage = 2,
  kExitDomain = 3,
  kExitSimulationFailed = 4,
};

/// Injection points for tests.
struct CliHooks {
  TermEvaluator evaluator = default_term_evaluator;
};

/// Runs one invocation. `args` excludes the program name. Results go to
/// `out` (or the --out file), diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
            const CliHooks& hooks = {});

}  // namespace cachelab
