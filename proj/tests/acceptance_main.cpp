// Runs every verification criterion at its stated tolerance and prints one
// PASS/FAIL line per criterion; exits nonzero when any fails.
#include <cstdio>
#include <iostream>

#include "hjnest/acceptance.hpp"

int main() {
  const auto results = hjnest::run_acceptance(std::cout);
  int failed = 0;
  for (const auto& r : results)
    if (!r.passed) ++failed;
  std::cout << (results.size() - failed) << "/" << results.size()
            << " criteria passed\n";
  return failed == 0 ? 0 : 1;
}
