#ifndef DFP_CROSSVAL_HPP_
#define DFP_CROSSVAL_HPP_

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "dfp/conformal.hpp"
#include "dfp/dataset.hpp"
#include "dfp/score.hpp"
#include "dfp/set.hpp"

namespace dfp {

// Partition [n] into K disjoint folds: contiguous blocks after a seeded
// shuffle. The coverage bounds assume equal fold sizes (K | n); unequal
// folds are allowed but flagged.
struct FoldPlan {
  int K = 0;
  std::vector<int> fold_of;  // fold id per row
  bool equal_sizes = true;

  static FoldPlan make(std::size_t n, int K, uint64_t seed);
  std::vector<std::size_t> fold_indices(int k) const;
  std::vector<std::size_t> complement_indices(int k) const;
};

// A symmetric regression algorithm: dataset -> fitted x -> yhat.
using RegressionFitter = std::function<
    std::function<double(const std::vector<double>&)>(const Dataset&)>;

struct StabilityParams {
  double epsilon = 0.0;
  double delta = 0.0;
};

enum class JackknifeVariant { kClassical, kPlus, kInflated };

// K-fold cross-conformal: y kept while the count of held-out scores it beats
// stays below (1-alpha)(n+1). K = 1 is rejected (no held-out comparisons).
PredictionSet cross_conformal_set(const ScoreFn& s, const Dataset& train,
                                  const std::vector<double>& x, double alpha,
                                  const FoldPlan& folds, const YDomain& dom);

// CV+ interval from leave-one-fold-out predictions at level
// tau = (1-alpha)(1+1/n).
std::pair<double, double> cv_plus_interval(const RegressionFitter& fit,
                                           const Dataset& train,
                                           const std::vector<double>& x,
                                           double alpha, const FoldPlan& folds);

// Leave-one-out constructions: classical jackknife f(x) +- Quantile(S; 1-a),
// jackknife+ (CV+ with K = n), and the stability-inflated jackknife
// f(x) +- (q_CV + epsilon).
std::pair<double, double> jackknife_interval(
    const RegressionFitter& fit, const Dataset& train,
    const std::vector<double>& x, double alpha, JackknifeVariant variant,
    StabilityParams stability = {});

// Training-conditional cross-conformal bound of coverage for equal folds:
// 1 - 2a - 2(1-a) min{(1-1/K)/(n/K+1), (1-K/n)/(K+1)}.
double cc_coverage_bound(std::size_t n, int K, double alpha);

// Row-sum property of mutually exclusive 0/1 tournament matrices
// (A_ij + A_ji <= 1): #{i : sum_j A_ij >= N(1-t)} <= 2tN.
bool tournament_rowsum_check(const std::vector<std::vector<int>>& A, double t);

}  // namespace dfp

#endif  // DFP_CROSSVAL_HPP_
