#pragma once

#include <map>
#include <string>
#include <vector>

namespace liouwalk {

struct CheckResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
  std::map<std::string, double> metrics;
};

// The full acceptance battery, in order. Every tolerance is pinned inside;
// all runs are deterministic (fixed seeds). `only` restricts to a single
// check id (0 runs everything).
std::vector<CheckResult> run_acceptance(int only = 0);

}  // namespace liouwalk
