#pragma once
// The pinned reproduction gate: nine numbered checks covering the ideal
// protocol value, measurement reconstruction, corrected bounds, the data
// pipeline, the p-value, classical/quantum facet bounds, the circuit
// template, and the invariant suite.  Each check carries its tolerance and
// runtime budget and reports a single pass/fail verdict.

#include <nlohmann/json.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace eacomm::criteria {

struct CriterionResult {
  int index = 0;
  std::string name;
  bool pass = false;
  double seconds = 0.0;
  std::string detail;   // human-readable measured values
  nlohmann::json data;  // machine-readable values, full precision
};

inline constexpr int kCriterionCount = 9;

CriterionResult run_one(int index, std::uint64_t seed = 0);
std::vector<CriterionResult> run_all(std::uint64_t seed = 0);

std::string format_line(const CriterionResult& r);

}  // namespace eacomm::criteria
