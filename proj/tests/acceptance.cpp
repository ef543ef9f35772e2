#include <cstdio>
#include <cstdlib>
#include <string>

#include "hym/criteria.hpp"

// Runs every acceptance criterion and prints one line each.
int main(int argc, char** argv) {
  hym::criteria::RunConfig cfg;
  if (argc > 1) cfg.seed = std::strtoull(argv[1], nullptr, 10);
  int failures = 0;
  for (int id = 1; id <= hym::criteria::criterion_count(); ++id) {
    const hym::criteria::CriterionResult r = hym::criteria::run_criterion(id, cfg);
    std::string detail;
    for (const auto& c : r.checks)
      if (!c.pass) detail += " [" + c.name + " = " + std::to_string(c.value) + "]";
    if (r.aborted) detail += " [aborted: " + r.error + "]";
    if (!r.within_time()) detail += " [over time limit]";
    std::printf("criterion %2d %-40s %s  %zu checks, %.1f s%s%s\n", id, ("(" + r.title + ")").c_str(),
                r.pass() ? "PASS" : "FAIL", r.checks.size(), r.seconds,
                r.time_limit > 0.0 ? (" (limit " + std::to_string(static_cast<int>(r.time_limit)) + " s)").c_str() : "",
                detail.c_str());
    std::fflush(stdout);
    if (!r.pass()) ++failures;
  }
  std::printf("%d of %d criteria failed\n", failures, hym::criteria::criterion_count());
  return failures == 0 ? 0 : 1;
}
