// Benchmark: times each Monte Carlo verification suite in serial and
// parallel mode and checks that both produce bit-identical reports.
// Usage: bench_harness [trials-scale] [seed]
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <string>

#include "dfp/harness.hpp"

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

std::size_t base_trials(const std::string& suite) {
  if (suite == "ls-full-cp") return 50;
  if (suite == "tracker-envelope") return 4;
  return 1000;
}

}  // namespace

int main(int argc, char** argv) {
  double scale = argc > 1 ? std::strtod(argv[1], nullptr) : 1.0;
  uint64_t seed = argc > 2 ? std::strtoull(argv[2], nullptr, 10) : 1ull;
  std::printf("%-22s %10s %10s %8s %6s  %s\n", "suite", "serial(s)",
              "parallel(s)", "speedup", "pass", "identical");
  bool all_identical = true;
  for (const auto& suite : dfp::suite_names()) {
    std::size_t trials =
        static_cast<std::size_t>(base_trials(suite) * scale);
    if (trials == 0) trials = 1;
    auto t0 = std::chrono::steady_clock::now();
    dfp::SuiteReport serial = dfp::run_suite(suite, trials, seed, false);
    double ts = seconds_since(t0);
    t0 = std::chrono::steady_clock::now();
    dfp::SuiteReport parallel = dfp::run_suite(suite, trials, seed, true);
    double tp = seconds_since(t0);
    bool identical = serial.to_json().dump() == parallel.to_json().dump();
    all_identical = all_identical && identical;
    std::printf("%-22s %10.3f %10.3f %8.2f %6s  %s\n", suite.c_str(), ts, tp,
                tp > 0.0 ? ts / tp : 0.0, serial.pass ? "yes" : "no",
                identical ? "yes" : "NO");
  }
  if (!all_identical) {
    std::fprintf(stderr, "parallel reports differ from serial reports\n");
    return 1;
  }
  return 0;
}
