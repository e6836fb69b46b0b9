#ifndef DFP_HARNESS_HPP_
#define DFP_HARNESS_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace dfp {

// One verification suite outcome. `estimate` is the headline number (e.g.
// empirical coverage); `band` describes the acceptance region in words;
// `details` carries per-check numbers for the JSON report.
struct SuiteReport {
  std::string suite;
  nlohmann::json params;
  double estimate = 0.0;
  std::string band;
  bool pass = false;
  nlohmann::json details;

  nlohmann::json to_json() const;
};

// Registered suite ids, in criterion order.
std::vector<std::string> suite_names();

// Run one Monte Carlo verification suite. trials = 0 yields an empty report
// with pass = false; parallel toggles the OpenMP path (the reduction is
// order-independent, so both paths give identical reports).
SuiteReport run_suite(const std::string& id, std::size_t trials, uint64_t seed,
                      bool parallel = true);

}  // namespace dfp

#endif  // DFP_HARNESS_HPP_
