// Acceptance runner: executes the Monte Carlo verification suites at their
// full advertised trial counts, printing one pass/fail line per criterion.
// Usage: acceptance [criterion-number | all] [seed]
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <chrono>
#include <string>
#include <vector>

#include "dfp/harness.hpp"

namespace {

struct Criterion {
  int number;
  const char* suite;
  std::size_t trials;
};

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> c = {
      {1, "split-coverage", 10000},
      {2, "beta-law", 10000},
      {3, "smoothed-uniform", 10000},
      {4, "ls-full-cp", 100},
      {5, "crossval", 10000},
      {6, "covariate-shift", 10000},
      {7, "tracker-envelope", 10},
      {8, "martingale", 10000},
      {9, "risk-control", 10000},
      {10, "outlier-fdr", 2000},
      {11, "online-independence", 10000},
      {12, "calibration", 2000},
      {13, "local-perm", 2000},
      {14, "regression-ci", 2000},
  };
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  std::string which = argc > 1 ? argv[1] : "all";
  uint64_t seed = argc > 2 ? std::strtoull(argv[2], nullptr, 10) : 20240817ull;
  bool all_pass = true;
  bool ran_any = false;
  for (const auto& c : criteria()) {
    if (which != "all" && which != std::to_string(c.number)) continue;
    ran_any = true;
    auto t0 = std::chrono::steady_clock::now();
    dfp::SuiteReport r = dfp::run_suite(c.suite, c.trials, seed);
    double secs = std::chrono::duration<double>(
                      std::chrono::steady_clock::now() - t0)
                      .count();
    std::printf("criterion %2d %-20s %s  estimate=%.6g  [%s]  (%.1fs)\n",
                c.number, c.suite, r.pass ? "PASS" : "FAIL", r.estimate,
                r.band.c_str(), secs);
    std::fflush(stdout);
    if (!r.pass) all_pass = false;
  }
  if (!ran_any) {
    std::fprintf(stderr, "unknown criterion '%s' (use 1..14 or all)\n",
                 which.c_str());
    return 2;
  }
  return all_pass ? 0 : 1;
}
