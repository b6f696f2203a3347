#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "qng/sweep.hpp"

namespace qng::cli {

enum ExitCode { kSuccess = 0, kValidationFailure = 1, kUsageError = 2 };

/// Runs the command line `args` (args[0] is the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Shortest round-trip-safe text for CSV/JSON cells (17 significant digits).
std::string format_number(double v);

std::string sweep_csv(const std::vector<SweepRow>& rows);
std::string sweep_json(const std::vector<SweepRow>& rows);

}  // namespace qng::cli
