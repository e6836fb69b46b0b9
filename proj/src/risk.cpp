#include "dfp/risk.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dfp {

double MonotoneLossFamily::empirical_risk(double lambda) const {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += loss(i, lambda);
  return s / static_cast<double>(n);
}

void MonotoneLossFamily::validate() const {
  if (n == 0) throw std::invalid_argument("MonotoneLossFamily: n >= 1");
  if (!(lambda_min <= lambda_max))
    throw std::invalid_argument("MonotoneLossFamily: bad lambda range");
  if (!loss) throw std::invalid_argument("MonotoneLossFamily: no loss fn");
  const int checks = 16;
  double prev = 2.0;
  for (int k = 0; k <= checks; ++k) {
    double lam = lambda_min +
                 (lambda_max - lambda_min) * static_cast<double>(k) / checks;
    double r = empirical_risk(lam);
    if (!(r >= 0.0 && r <= 1.0))
      throw std::invalid_argument("MonotoneLossFamily: loss outside [0,1]");
    if (r > prev + 1e-12)
      throw std::invalid_argument("MonotoneLossFamily: risk not nonincreasing");
    prev = r;
  }
}

RiskCalibration risk_calibrate(const MonotoneLossFamily& family, double alpha) {
  family.validate();
  double n = static_cast<double>(family.n);
  double target = alpha - (1.0 - alpha) / n;
  if (target < 0.0) return {family.lambda_max, true};
  if (!family.grid.empty()) {
    std::vector<double> grid = family.grid;
    std::sort(grid.begin(), grid.end());
    for (double lam : grid)
      if (family.empirical_risk(lam) <= target + 1e-12) return {lam, false};
    return {family.lambda_max, false};  // certificate: risk at lambda_max is 0
  }
  if (family.empirical_risk(family.lambda_min) <= target)
    return {family.lambda_min, false};
  double lo = family.lambda_min, hi = family.lambda_max;
  // invariant: risk(lo) > target >= risk(hi); right-continuity makes hi valid
  while (hi - lo > 1e-9) {
    double mid = 0.5 * (lo + hi);
    if (family.empirical_risk(mid) <= target)
      hi = mid;
    else
      lo = mid;
  }
  return {hi, false};
}

std::vector<double> outlier_pvalues(const FiniteSample& cal_scores,
                                    const std::vector<double>& test_scores) {
  const auto& cal = cal_scores.sorted();
  double n = static_cast<double>(cal.size());
  std::vector<double> p(test_scores.size());
  for (std::size_t i = 0; i < test_scores.size(); ++i) {
    // #{j : test_i <= cal_j}
    auto it = std::lower_bound(cal.begin(), cal.end(), test_scores[i]);
    std::size_t count = static_cast<std::size_t>(cal.end() - it);
    p[i] = (1.0 + static_cast<double>(count)) / (n + 1.0);
  }
  return p;
}

RejectionSet bh_procedure(const std::vector<double>& pvalues, double q) {
  const std::size_t m = pvalues.size();
  if (m == 0) return {};
  for (double p : pvalues)
    if (!(p >= 0.0 && p <= 1.0))
      throw std::invalid_argument("bh_procedure: p outside [0,1]");
  std::vector<double> sorted = pvalues;
  std::sort(sorted.begin(), sorted.end());
  std::size_t k_hat = 0;
  for (std::size_t k = m; k >= 1; --k) {
    double thr = q * static_cast<double>(k) / static_cast<double>(m);
    std::size_t count = static_cast<std::size_t>(
        std::upper_bound(sorted.begin(), sorted.end(), thr) - sorted.begin());
    if (count >= k) {
      k_hat = k;
      break;
    }
  }
  RejectionSet r;
  if (k_hat == 0) return r;
  r.threshold = q * static_cast<double>(k_hat) / static_cast<double>(m);
  for (std::size_t i = 0; i < m; ++i)
    if (pvalues[i] <= r.threshold) r.indices.push_back(i);
  return r;
}

double fwer_level(std::size_t m, double fwer_target) {
  if (m < 1) throw std::invalid_argument("fwer_level: m >= 1");
  if (!(fwer_target > 0.0 && fwer_target < 1.0))
    throw std::invalid_argument("fwer_level: target in (0,1)");
  return 1.0 - std::pow(1.0 - fwer_target, 1.0 / static_cast<double>(m));
}

}  // namespace dfp
