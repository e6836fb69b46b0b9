#ifndef DFP_PREDICTOR_HPP_
#define DFP_PREDICTOR_HPP_

#include <memory>
#include <vector>

#include "dfp/dataset.hpp"

namespace dfp {

enum class PredictorKind {
  kLeastSquares,   // OLS with intercept; errors on rank deficiency
  kRidge,          // OLS + lambda penalty on all coefficients but the intercept
  kKnn,            // mean of k nearest responses, distance ties -> lowest index
  kHistQuantile,   // per-bin finite-list quantile of y (1-d x only)
  kHistClassProb,  // per-bin label frequencies (1-d x only)
  kHistDensity,    // 2-d histogram density estimate of y|x (1-d x only)
};

struct PredictorSpec {
  PredictorKind kind = PredictorKind::kLeastSquares;
  double ridge_lambda = 0.0;
  int knn_k = 1;
  int bins = 10;        // x bins for the hist_* kinds
  int bins_y = 10;      // y bins for hist_density
  int num_labels = 2;   // label-space size for hist_classprob
};

// A fitted model. Fitting is deterministic and permutation-invariant in the
// training rows, so every score built on top is symmetric.
class Predictor {
 public:
  static Predictor fit(const PredictorSpec& spec, const Dataset& train);

  // Point prediction (least_squares / ridge / knn).
  double predict(const std::vector<double>& x) const;
  // Conditional quantile at level beta (hist_quantile).
  double quantile(const std::vector<double>& x, double beta) const;
  // P(label | x) (hist_classprob); empty bin -> uniform over labels.
  double class_prob(const std::vector<double>& x, int label) const;
  int num_labels() const;
  // Density estimate f(y|x) (hist_density); empty x bin -> uniform over
  // the training y range.
  double density(const std::vector<double>& x, double y) const;

  PredictorKind kind() const;

  struct Impl;

 private:
  std::shared_ptr<const Impl> impl_;
};

}  // namespace dfp

#endif  // DFP_PREDICTOR_HPP_
