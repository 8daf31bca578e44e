#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace glauber {

struct CheckResult {
  bool passed = false;
  std::string detail;
};

struct Check {
  std::string name;  // "<module>.<property>"
  std::function<CheckResult()> run;
};

struct CheckOptions {
  std::uint64_t seed = 20240817;
  // Injection point for fault-injection tests of the suite itself; the
  // encoding-equivalence check derives the voter refresh probability from
  // this instead of the model parameters.
  std::function<double(double)> theta_fn;
};

// Desk-scale executable form of every module's invariants.
std::vector<Check> build_check_suite(const CheckOptions& options = {});

struct CheckRunSummary {
  int ran = 0;
  int failed = 0;
};

// Runs the checks whose name contains `filter` (all when empty), printing one
// pass/fail line each.
CheckRunSummary run_checks(const std::vector<Check>& checks,
                           std::string_view filter, std::ostream& out);

}  // namespace glauber
