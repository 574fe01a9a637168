#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "bitoss/json_io.hpp"

namespace bitoss::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 2,
  kResource = 3,
  kSupport = 4,
  kInfeasible = 5,
};

/// Runs one command line (without the program name). Results and JSON go to
/// `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Evaluates a succession request {"rule": ..., params...} to {"rule": ..., "mean": ...}.
/// Exact means are rendered as "num/den" strings.
json evaluate_succession(const json& request);

}  // namespace bitoss::cli
