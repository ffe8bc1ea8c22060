// Runs every verification suite and prints one PASS/FAIL line per criterion,
// followed by the individual checks. Usage: acceptance [fast|full]
#include <cstdio>
#include <iostream>

#include "simplygen/summary.hpp"
#include "simplygen/verify.hpp"

using namespace simplygen;

int main(int argc, char** argv) {
  VerifyOptions o;
  try {
    if (argc > 1) o.budget = parse_budget(argv[1]);
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }
  o.workers = default_workers();

  int failed = 0;
  double total = 0.0;
  for (const auto& s : suites()) {
    const SuiteResult r = s.run(o);
    total += r.seconds;
    if (!r.pass()) ++failed;
    std::printf("%s criterion %2d %-18s (%.1f s)\n", r.pass() ? "PASS" : "FAIL", s.criterion, s.name, r.seconds);
    for (const auto& c : r.checks) {
      std::printf("      %s %s | %s\n", c.pass ? "ok " : "BAD", c.name.c_str(), c.detail.c_str());
    }
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria failed, %.1f s\n", failed, suites().size(), total);
  return failed == 0 ? 0 : 1;
}
