#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace pg::checks {

struct CheckResult {
  std::string id;      // "A1".."A10" for acceptance criteria, suite-local otherwise
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

/// Suites runnable via `pgbench check <suite>`.
std::vector<std::string> suite_names();

/// Run one named suite (estimators, schedules, optimizers, oracle, rates,
/// determinism) or "acceptance" for the ten acceptance criteria in order.
std::vector<CheckResult> run_suite(const std::string& suite, unsigned workers = 0);

bool all_passed(const std::vector<CheckResult>& results);
void print_report(std::ostream& os, const std::vector<CheckResult>& results);
std::string report_json(const std::vector<CheckResult>& results);

}  // namespace pg::checks
