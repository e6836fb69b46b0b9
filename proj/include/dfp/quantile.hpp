#ifndef DFP_QUANTILE_HPP_
#define DFP_QUANTILE_HPP_

#include <cstddef>
#include <utility>
#include <vector>

namespace dfp {

namespace detail {
// Levels such as (1-alpha)(1+1/n) are exact rationals whose floating-point
// image can overshoot an integer index by a few ulp (e.g. 0.9 * 100/99 * 99
// evaluates to 90.000000000000014, and ceil would then select the wrong
// order statistic). Values within a 1e-9 relative distance of an integer are
// snapped back before any ceil/compare.
inline double snap_integer(double t) {
  double r = static_cast<double>(static_cast<long long>(t + (t < 0 ? -0.5 : 0.5)));
  if (t > 9.0e15 || t < -9.0e15) return t;
  double tol = 1e-9 * (t < 0 ? -t : t);
  if (tol < 1e-12) tol = 1e-12;
  return (t - r <= tol && r - t <= tol) ? r : t;
}
}  // namespace detail

// A finite real sample with the inf-based quantile conventions used by every
// construction in this library: no interpolation, ties resolved by the inf
// definition, tau <= 0 -> -inf and tau > 1 -> +inf.
class FiniteSample {
 public:
  // Rejects empty input and non-finite entries. Sort is deterministic on
  // (value, original index) so repeated runs are bit-identical.
  explicit FiniteSample(std::vector<double> values);

  std::size_t size() const { return sorted_.size(); }
  const std::vector<double>& sorted() const { return sorted_; }

  // k-th order statistic, 1-based: inf{v : #{z_i <= v} >= k}.
  double order_statistic(std::size_t k) const;

  // (1/n) #{z_i <= v}; v may be +-inf, NaN rejected.
  double empirical_cdf(double v) const;

  // inf{v : F(v) >= tau} = z_(ceil(tau*n)); tau <= 0 -> -inf, tau > 1 -> +inf.
  double quantile(double tau) const;

 private:
  std::vector<double> sorted_;
};

// Weighted empirical distribution sum_i w_i delta_{v_i}. Weights must be
// nonnegative and sum to 1 within 1e-9 (renormalized); at most one atom may
// sit at +inf (the test-point atom of weighted split conformal).
class WeightedEmpirical {
 public:
  WeightedEmpirical(std::vector<double> values, std::vector<double> weights);

  std::size_t size() const { return values_.size(); }
  const std::vector<double>& values() const { return values_; }
  const std::vector<double>& weights() const { return weights_; }

  // inf{v : sum_{v_i <= v} w_i >= tau}; tau <= 0 -> -inf, tau > 1 -> +inf.
  double quantile(double tau) const;

 private:
  std::vector<double> values_;   // sorted, (value, original index) order
  std::vector<double> weights_;  // matching order
};

// Both sides of the augmented-quantile equivalence:
//   v_new <= Quantile(v u {v_new}; t)  <=>  v_new <= Quantile(v; t(1+1/n)).
// The two booleans are always equal; returned as a pair for property tests.
std::pair<bool, bool> augmented_threshold_equiv(const FiniteSample& v,
                                                double v_new, double t);

}  // namespace dfp

#endif  // DFP_QUANTILE_HPP_
