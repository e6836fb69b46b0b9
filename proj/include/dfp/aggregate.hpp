#ifndef DFP_AGGREGATE_HPP_
#define DFP_AGGREGATE_HPP_

#include <functional>
#include <vector>

#include "dfp/dataset.hpp"
#include "dfp/set.hpp"

namespace dfp {

// Strict-majority merge: y kept when more than half of the inputs contain it.
// If each input covers with probability >= 1-alpha, the merge covers with
// probability >= 1-2alpha.
PredictionSet majority_vote(const std::vector<PredictionSet>& sets);

// A family of set constructors C_k(x; lambda), lambda in [0,1] a confidence
// level. The recalibration machinery evaluates members on a fixed dyadic
// lambda grid (resolution 1/512) and works with their monotone envelopes
// C'_k(x; lambda) = union over grid lambda' <= lambda of C_k(x; lambda'), so
// membership is nondecreasing in lambda by construction.
struct SetFamily {
  std::vector<
      std::function<PredictionSet(const std::vector<double>&, double)>>
      members;
  static constexpr int kGridSteps = 512;  // lambda grid: j/512, j = 0..512
};

struct RecalibratedVote {
  double lambda_hat = 1.0;
  bool saturated = false;  // empirical target never reached; lambda_hat = 1
};

// Post-aggregation recalibration: the smallest grid lambda whose
// majority-vote envelope miscovers at most alpha - (1-alpha)/n of the
// calibration points. Reduces to split conformal with score
// s(x,y) = inf{lambda : y in C^mv(x; lambda)}.
RecalibratedVote recalibrated_vote(const SetFamily& family, const Dataset& cal,
                                   double alpha);

// The majority-vote envelope set at level lambda (grid-rounded up).
PredictionSet recalibrated_set(const SetFamily& family, double lambda,
                               const std::vector<double>& x);

// Entry level of y into the majority-vote envelope at x: the smallest grid
// lambda with y in C^mv(x; lambda); > 1 when never entered.
double vote_entry_level(const SetFamily& family, const std::vector<double>& x,
                        double y);

}  // namespace dfp

#endif  // DFP_AGGREGATE_HPP_
