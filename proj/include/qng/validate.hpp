#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace qng {

struct CheckResult {
  std::string id;       // "A1".."A9" for acceptance criteria, "I.." for invariant suites
  std::string name;
  bool passed = false;
  std::string detail;   // observed deviations; deterministic formatting
};

struct ValidateOptions {
  std::uint64_t seed = 1;
  /// Relative perturbation applied to eta when building states (harness self-test).
  double eta_perturbation = 0.0;
};

/// Identifiers of all checks, in report order.
const std::vector<std::string>& check_ids();

/// Runs one check by id.
CheckResult run_check(const std::string& id, const ValidateOptions& opts);

std::vector<CheckResult> run_validation(const ValidateOptions& opts);

std::string format_report(const std::vector<CheckResult>& results);
bool all_passed(const std::vector<CheckResult>& results);

}  // namespace qng
