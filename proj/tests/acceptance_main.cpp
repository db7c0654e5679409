// Runs the full acceptance battery and prints one pass/fail line per check.
// Exit status is the number of failed checks.

#include <cstdio>
#include <cstdlib>
#include <exception>

#include "liouwalk/acceptance.hpp"

int main(int argc, char** argv) {
  const int only = argc > 1 ? std::atoi(argv[1]) : 0;
  int failures = 0;
  try {
    for (const auto& check : liouwalk::run_acceptance(only)) {
      std::printf("[%s] %2d %s: %s\n", check.passed ? "PASS" : "FAIL", check.id,
                  check.name.c_str(), check.detail.c_str());
      std::fflush(stdout);
      if (!check.passed) ++failures;
    }
  } catch (const std::exception& e) {
    std::printf("[FAIL] acceptance run aborted: %s\n", e.what());
    return 99;
  }
  return failures;
}
