#include "dfp/quantile.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace dfp {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

// Deterministic total order on (value, original index).
std::vector<std::size_t> sort_order(const std::vector<double>& v) {
  std::vector<std::size_t> idx(v.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    if (v[a] != v[b]) return v[a] < v[b];
    return a < b;
  });
  return idx;
}
}  // namespace

FiniteSample::FiniteSample(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("FiniteSample: empty input");
  for (double v : values) {
    if (!std::isfinite(v))
      throw std::invalid_argument("FiniteSample: non-finite entry");
  }
  sorted_ = std::move(values);
  std::sort(sorted_.begin(), sorted_.end());
}

double FiniteSample::order_statistic(std::size_t k) const {
  if (k < 1 || k > sorted_.size())
    throw std::out_of_range("order_statistic: k out of range");
  return sorted_[k - 1];
}

double FiniteSample::empirical_cdf(double v) const {
  if (std::isnan(v)) throw std::invalid_argument("empirical_cdf: NaN");
  auto it = std::upper_bound(sorted_.begin(), sorted_.end(), v);
  return static_cast<double>(it - sorted_.begin()) /
         static_cast<double>(sorted_.size());
}

double FiniteSample::quantile(double tau) const {
  if (std::isnan(tau)) throw std::invalid_argument("quantile: NaN tau");
  if (tau <= 0.0) return -kInf;
  if (tau > 1.0) return kInf;
  const auto n = sorted_.size();
  double t = detail::snap_integer(tau * static_cast<double>(n));
  auto k = static_cast<std::size_t>(std::ceil(t));
  if (k < 1) k = 1;
  if (k > n) k = n;
  return sorted_[k - 1];
}

WeightedEmpirical::WeightedEmpirical(std::vector<double> values,
                                     std::vector<double> weights) {
  if (values.empty() || values.size() != weights.size())
    throw std::invalid_argument("WeightedEmpirical: size mismatch");
  int inf_atoms = 0;
  for (double v : values) {
    if (std::isnan(v)) throw std::invalid_argument("WeightedEmpirical: NaN value");
    if (v == kInf) ++inf_atoms;
    if (v == -kInf)
      throw std::invalid_argument("WeightedEmpirical: -inf atom not allowed");
  }
  if (inf_atoms > 1)
    throw std::invalid_argument("WeightedEmpirical: more than one +inf atom");
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0))
      throw std::invalid_argument("WeightedEmpirical: negative or NaN weight");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-9)
    throw std::invalid_argument("WeightedEmpirical: weights do not sum to 1");
  auto idx = sort_order(values);
  values_.reserve(values.size());
  weights_.reserve(values.size());
  for (std::size_t i : idx) {
    values_.push_back(values[i]);
    weights_.push_back(weights[i] / total);
  }
}

double WeightedEmpirical::quantile(double tau) const {
  if (std::isnan(tau)) throw std::invalid_argument("quantile: NaN tau");
  if (tau <= 0.0) return -kInf;
  if (tau > 1.0) return kInf;
  double cum = 0.0;
  std::size_t i = 0;
  while (i < values_.size()) {
    // Ties share one cumulative mass; advance over the whole tie block.
    double v = values_[i];
    while (i < values_.size() && values_[i] == v) cum += weights_[i++];
    if (cum >= tau - 1e-12) return v;
  }
  return kInf;  // rounding shortfall at tau == 1
}

std::pair<bool, bool> augmented_threshold_equiv(const FiniteSample& v,
                                                double v_new, double t) {
  std::vector<double> aug = v.sorted();
  aug.push_back(v_new);
  FiniteSample augmented(std::move(aug));
  bool lhs = v_new <= augmented.quantile(t);
  bool rhs = v_new <= v.quantile(t * (1.0 + 1.0 / static_cast<double>(v.size())));
  return {lhs, rhs};
}

}  // namespace dfp
