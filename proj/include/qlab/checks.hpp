#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace qlab {

struct CheckResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

struct CheckInfo {
  int id;
  std::string name;
  std::function<CheckResult()> run;
};

/// The acceptance checks, in order. Each is self-contained.
const std::vector<CheckInfo>& acceptance_checks();

/// Suite names: "acceptance" (all), "fast" (no optimiser sweeps, no
/// Lindblad), "slow" (full-size N = 12 scaling run), or a single check name.
std::vector<std::string> suite_names();

/// Runs a suite, printing one "PASS"/"FAIL" line per check to `os` as it
/// goes. Throws std::invalid_argument for unknown suites.
std::vector<CheckResult> run_suite(const std::string& suite, std::ostream& os);

/// One line: "PASS  1 fixed_ghz ...".
std::string format_check(const CheckResult& r);

}  // namespace qlab
