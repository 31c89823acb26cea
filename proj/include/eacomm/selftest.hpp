#pragma once
// Fast invariant suite, runnable standalone through the CLI: structural
// checks (CPTP, POVM, density), protocol invariants (no-signaling,
// perfect discrimination), and optimizer certificates (monotonicity,
// dual gaps, strong duality).

#include <cstdint>
#include <string>
#include <vector>

namespace eacomm::selftest {

struct CheckResult {
  std::string name;
  bool pass = false;
  double metric = 0.0;  // worst deviation observed (or gap)
  double limit = 0.0;
  std::string detail;
};

std::vector<CheckResult> run(std::uint64_t seed = 0);
bool all_passed(const std::vector<CheckResult>& results);

}  // namespace eacomm::selftest
