#ifndef DFP_WEIGHTED_HPP_
#define DFP_WEIGHTED_HPP_

#include <functional>
#include <utility>
#include <vector>

#include "dfp/conformal.hpp"
#include "dfp/dataset.hpp"
#include "dfp/rng.hpp"
#include "dfp/score.hpp"
#include "dfp/set.hpp"

namespace dfp {

// Test/train likelihood ratio dQ/dP, known up to a constant. Covariate kind
// depends on x only, label kind on y only, joint on both.
struct LikelihoodRatio {
  enum class Kind { kCovariate, kLabel, kJoint };
  Kind kind = Kind::kCovariate;
  std::function<double(const std::vector<double>&)> wx;
  std::function<double(double)> wy;
  std::function<double(const std::vector<double>&, double)> wxy;

  double ratio(const std::vector<double>& x, double y) const;
  static LikelihoodRatio covariate(
      std::function<double(const std::vector<double>&)> f);
  static LikelihoodRatio label(std::function<double(double)> f);
  static LikelihoodRatio joint(
      std::function<double(const std::vector<double>&, double)> f);
};

struct LocalizationKernel {
  std::function<double(const std::vector<double>&, const std::vector<double>&)>
      H;
  double bound = 0.0;  // sup H when declared (> 0); required for blurring
  // Exact sampler for the density H(x, .); required by the randomly-localized
  // variant. The library never invents a sampler.
  std::function<std::vector<double>(const std::vector<double>&, Rng&)> sampler;
};

// Self-normalized weights w_1..w_{n+1} from the likelihood ratio evaluated
// at the calibration points and the hypothesized test point. Covariate-kind
// weights do not depend on hyp_y.
std::vector<double> shift_weights(const LikelihoodRatio& lr,
                                  const Dataset& train,
                                  const std::vector<double>& test_x,
                                  double hyp_y);

// Weighted full conformal: y kept when its score is within the (1-alpha)
// weighted quantile of all n+1 score atoms.
PredictionSet weighted_full_set(const ScoreFn& s, const Dataset& train,
                                const std::vector<double>& x, double alpha,
                                const LikelihoodRatio& lr, const YDomain& dom);

// Weighted split conformal (pretrained score, covariate shift only): the
// test atom sits at +inf with weight w_{n+1}.
PredictionSet weighted_split_set(const PointScore& s, const Dataset& cal,
                                 const std::vector<double>& x, double alpha,
                                 const LikelihoodRatio& lr, const YDomain& dom);

// Fixed, data-independent weights; requires w_{n+1} >= max_i w_i and sum 1.
PredictionSet fixed_weight_set(const ScoreFn& s, const Dataset& train,
                               const std::vector<double>& x, double alpha,
                               const std::vector<double>& w,
                               const YDomain& dom);

// Localized conformal: rank-recalibrated scores
// S~_i = sum_j w_{i,j} 1{S_j < S_i}, w_{i,j} = H(X_j, X_i) / sum_j' H(X_j', X_i),
// thresholded at the plain (1-alpha) quantile of S~_1..S~_{n+1}.
PredictionSet localized_set(const ScoreFn& s, const Dataset& train,
                            const std::vector<double>& x, double alpha,
                            const LocalizationKernel& kernel,
                            const YDomain& dom);

// Randomly-localized conformal: sample x~ from H(x, .), then run weighted
// full conformal with weights proportional to H(X_i, x~). Returns x~ so the
// conditional guarantee can be audited.
std::pair<PredictionSet, std::vector<double>> randomly_localized_set(
    const ScoreFn& s, const Dataset& train, const std::vector<double>& x,
    double alpha, const LocalizationKernel& kernel, uint64_t seed,
    const YDomain& dom);

}  // namespace dfp

#endif  // DFP_WEIGHTED_HPP_
