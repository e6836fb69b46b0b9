#ifndef DFP_RISK_HPP_
#define DFP_RISK_HPP_

#include <cstddef>
#include <functional>
#include <vector>

#include "dfp/quantile.hpp"

namespace dfp {

// A family of losses L(Y_i, C_lambda(X_i)) in [0,1], nonincreasing and
// right-continuous in lambda, with L(., lambda_max) = 0. `loss(i, lambda)`
// evaluates the loss of calibration point i. When `grid` is nonempty the
// search is an exact ascending scan over it; otherwise bisection (tol 1e-9).
struct MonotoneLossFamily {
  std::size_t n = 0;
  double lambda_min = 0.0;
  double lambda_max = 1.0;
  std::vector<double> grid;
  std::function<double(std::size_t, double)> loss;

  double empirical_risk(double lambda) const;
  // Spot-checks range and monotonicity on a coarse lambda grid.
  void validate() const;
};

struct RiskCalibration {
  double lambda_hat;
  bool infeasible = false;  // alpha - (1-alpha)/n < 0: lambda_max returned
};

// lambda_hat = inf{lambda : Rhat(lambda) <= alpha - (1-alpha)/n}; guarantees
// expected test loss <= alpha for exchangeable data.
RiskCalibration risk_calibrate(const MonotoneLossFamily& family, double alpha);

// Conformal outlier p-values p_i = (1 + #{j : test_i <= cal_j}) / (n+1).
std::vector<double> outlier_pvalues(const FiniteSample& cal_scores,
                                    const std::vector<double>& test_scores);

struct RejectionSet {
  std::vector<std::size_t> indices;
  double threshold = 0.0;  // q * k_hat / m (0 when empty)
};

// Benjamini-Hochberg at target FDR q: reject {i : p_i <= q k / m} for the
// largest k with at least k such p-values; ties at the threshold inclusive.
RejectionSet bh_procedure(const std::vector<double>& pvalues, double q);

// Per-test level alpha = 1 - (1 - fwer_target)^{1/m}.
double fwer_level(std::size_t m, double fwer_target);

}  // namespace dfp

#endif  // DFP_RISK_HPP_
