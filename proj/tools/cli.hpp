#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ratbounds::cli {

// Exit codes shared by every subcommand.
enum Exit : int { kOk = 0, kVerifyFailed = 1, kUsage = 2, kSolverFailed = 3, kUnwritable = 4 };

// Runs the command line `args` (without the program name) and returns the
// exit code. Normal output goes to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Reads RATBOUNDS_LOG (trace, debug, info, warn, error, critical, off) and
// routes library logging to stderr.
void configure_logging();

struct VerifyOptions {
  std::string suite = "all";  // analytic, mc or all
  unsigned long long seed = 7;
  int jobs = 1;
};

// Runs the invariant suites and prints one PASS/FAIL line per check.
// Returns true iff all checks pass.
bool run_verify(const VerifyOptions& opt, std::ostream& out);

}  // namespace ratbounds::cli
