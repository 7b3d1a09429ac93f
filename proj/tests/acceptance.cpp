// One PASS/FAIL line per acceptance criterion; nonzero exit if any fails.
#include <iostream>
#include <string>

#include "qlab/checks.hpp"

int main(int argc, char** argv) {
  const std::string suite = argc > 1 ? argv[1] : "acceptance";
  const auto results = qlab::run_suite(suite, std::cout);
  int failed = 0;
  for (const auto& r : results) failed += r.passed ? 0 : 1;
  std::cout << results.size() - failed << "/" << results.size() << " criteria passed\n";
  return failed == 0 ? 0 : 1;
}
