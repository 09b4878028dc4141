// Runs the thirteen acceptance criteria and prints one line per criterion.
// Exit status is nonzero if any criterion fails or exceeds its time budget.

#include <cstdio>
#include <cstring>

#include "anyonlt/report.hpp"
#include "anyonlt/suites.hpp"

int main(int argc, char** argv) {
  using namespace anyonlt;
  report::RunConfig config;
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) only = std::atoi(argv[++i]);
  }
  int failures = 0;
  for (const auto& c : suites::acceptance_criteria()) {
    if (only && c.id != only) continue;
    suites::SuiteOutput out;
    const auto check = suites::run_criterion(c, config, out);
    const bool in_time = check.runtime_seconds <= c.runtime_limit_seconds;
    const bool ok = check.status == report::Status::pass && in_time;
    if (!ok) ++failures;
    std::printf("[%s] criterion %2d %-24s %8.2fs (limit %.0fs) value=%s\n", ok ? "PASS" : "FAIL", c.id, c.name.c_str(),
                check.runtime_seconds, c.runtime_limit_seconds, check.value.dump().c_str());
    if (!in_time) std::printf("       exceeded the time budget\n");
    if (!ok && !check.detail.empty()) std::printf("       %s\n", check.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
