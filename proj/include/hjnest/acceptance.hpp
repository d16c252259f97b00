#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace hjnest {

struct CriterionResult {
  int number = 0;
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Runs the full acceptance suite (solver-vs-oracle agreement, rate checks,
/// bound checks, boundary behavior, trajectory identities, scheme
/// properties), printing one PASS/FAIL line per criterion to `out`.
std::vector<CriterionResult> run_acceptance(std::ostream& out);

bool all_passed(const std::vector<CriterionResult>& results);

}  // namespace hjnest
