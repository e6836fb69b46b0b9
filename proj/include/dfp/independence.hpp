#ifndef DFP_INDEPENDENCE_HPP_
#define DFP_INDEPENDENCE_HPP_

#include <cstdint>
#include <functional>
#include <vector>

#include "dfp/weighted.hpp"

namespace dfp {

// T(x permutation applied, y): deterministic statistic; larger = stronger
// evidence against the null.
using TestStatistic = std::function<double(const std::vector<double>&,
                                           const std::vector<double>&)>;

TestStatistic abs_correlation_statistic();
TestStatistic ks_two_sample_statistic();  // x must be binary group labels

// Exhaustive enumeration is limited to n <= 8 (8! evaluations); sampled mode
// draws M permutations with replacement and applies the +1 correction.
struct PermutationBudget {
  enum class Mode { kExhaustive, kSampled };
  Mode mode = Mode::kSampled;
  std::size_t samples = 999;
  uint64_t seed = 0;
};

struct TestResult {
  double pvalue = 1.0;
  bool reject = false;
  double inflation = 0.0;  // binned local test: L * h * sqrt(2n)
};

// Permutation test of X independent of Y: permutes x only.
TestResult marginal_independence_test(const std::vector<double>& xs,
                                      const std::vector<double>& ys,
                                      const TestStatistic& T,
                                      const PermutationBudget& budget,
                                      double alpha);

// Local permutation test of X independent of Y given W: only permutations
// preserving the exact w values are used. All-distinct w gives p = 1.
TestResult local_permutation_test(const std::vector<double>& xs,
                                  const std::vector<double>& ys,
                                  const std::vector<double>& ws,
                                  const TestStatistic& T,
                                  const PermutationBudget& budget,
                                  double alpha);

// Binned variant: w values mapped to bins of diameter <= h; validity degrades
// to alpha + L h sqrt(2n) for L-Lipschitz P_{X|W}. L is caller metadata used
// only for the reported inflation.
TestResult binned_local_permutation_test(
    const std::vector<double>& xs, const std::vector<double>& ys,
    const std::vector<double>& ws,
    const std::function<int(double)>& bin_of_w, const TestStatistic& T,
    const PermutationBudget& budget, double alpha, double lipschitz_L = 0.0,
    double bin_diameter = 0.0);

enum class RegressionCiMethod { kDiscrete, kBinned, kBlurred };

struct RegressionCi {
  double lo = 0.0;
  double hi = 1.0;
  std::size_t local_n = 0;  // matched (or accepted) sample size
};

struct RegressionCiParams {
  double a = 0.0, b = 1.0;  // response range
  std::function<int(const std::vector<double>&)> bin_of;  // binned method
  LocalizationKernel kernel;                              // blurred method
  uint64_t seed = 0;                                      // blurred method
};

// Distribution-free CI for the regression function at query_x: Hoeffding
// interval over exact matches (discrete), bin matches (binned), or a
// kernel-tilted rejection subsample (blurred); empty local sample -> [a,b].
RegressionCi regression_ci(const Dataset& train,
                           const std::vector<double>& query_x, double alpha,
                           RegressionCiMethod method,
                           const RegressionCiParams& params);

}  // namespace dfp

#endif  // DFP_INDEPENDENCE_HPP_
