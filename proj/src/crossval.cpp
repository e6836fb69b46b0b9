#include "dfp/crossval.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "dfp/quantile.hpp"
#include "dfp/rng.hpp"

namespace dfp {

FoldPlan FoldPlan::make(std::size_t n, int K, uint64_t seed) {
  if (K < 1 || static_cast<std::size_t>(K) > n)
    throw std::invalid_argument("FoldPlan: K out of range");
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  Rng rng(seed);
  for (std::size_t i = n; i > 1; --i)
    std::swap(order[i - 1], order[rng.below(i)]);
  FoldPlan plan;
  plan.K = K;
  plan.fold_of.assign(n, 0);
  // near-equal contiguous blocks over the shuffled order
  std::size_t base = n / K, extra = n % K, pos = 0;
  for (int k = 0; k < K; ++k) {
    std::size_t size = base + (static_cast<std::size_t>(k) < extra ? 1 : 0);
    for (std::size_t j = 0; j < size; ++j) plan.fold_of[order[pos++]] = k;
  }
  plan.equal_sizes = (extra == 0);
  return plan;
}

std::vector<std::size_t> FoldPlan::fold_indices(int k) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < fold_of.size(); ++i)
    if (fold_of[i] == k) out.push_back(i);
  return out;
}

std::vector<std::size_t> FoldPlan::complement_indices(int k) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < fold_of.size(); ++i)
    if (fold_of[i] != k) out.push_back(i);
  return out;
}

PredictionSet cross_conformal_set(const ScoreFn& s, const Dataset& train,
                                  const std::vector<double>& x, double alpha,
                                  const FoldPlan& folds, const YDomain& dom) {
  const std::size_t n = train.n();
  if (folds.fold_of.size() != n)
    throw std::invalid_argument("cross_conformal_set: fold plan size mismatch");
  if (folds.K < 2)
    throw std::invalid_argument(
        "cross_conformal_set: K >= 2 required (K = 1 has no held-out folds)");
  // one fit per fold, on the complement
  std::vector<PointScore> per_fold(folds.K);
  for (int k = 0; k < folds.K; ++k)
    per_fold[k] = s.trained_on(train.subset(folds.complement_indices(k)));
  std::vector<double> held_scores(n);
  for (std::size_t i = 0; i < n; ++i)
    held_scores[i] = per_fold[folds.fold_of[i]](train.x[i], train.y[i]);

  double limit =
      detail::snap_integer((1.0 - alpha) * (static_cast<double>(n) + 1.0));
  auto accept = [&](double y) {
    std::size_t count = 0;
    for (std::size_t i = 0; i < n; ++i)
      if (per_fold[folds.fold_of[i]](x, y) > held_scores[i]) ++count;
    return static_cast<double>(count) < limit;
  };
  return set_from_domain(dom, accept);
}

std::pair<double, double> cv_plus_interval(const RegressionFitter& fit,
                                           const Dataset& train,
                                           const std::vector<double>& x,
                                           double alpha,
                                           const FoldPlan& folds) {
  const std::size_t n = train.n();
  if (folds.fold_of.size() != n)
    throw std::invalid_argument("cv_plus_interval: fold plan size mismatch");
  std::vector<std::function<double(const std::vector<double>&)>> models(
      folds.K);
  for (int k = 0; k < folds.K; ++k)
    models[k] = fit(train.subset(folds.complement_indices(k)));
  std::vector<double> hi_atoms(n), neg_lo_atoms(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& m = models[folds.fold_of[i]];
    double s_i = std::abs(train.y[i] - m(train.x[i]));
    double pred = m(x);
    hi_atoms[i] = pred + s_i;
    neg_lo_atoms[i] = -(pred - s_i);
  }
  double tau = (1.0 - alpha) * (1.0 + 1.0 / static_cast<double>(n));
  double hi = FiniteSample(hi_atoms).quantile(tau);
  double lo = -FiniteSample(neg_lo_atoms).quantile(tau);
  return {lo, hi};
}

std::pair<double, double> jackknife_interval(const RegressionFitter& fit,
                                             const Dataset& train,
                                             const std::vector<double>& x,
                                             double alpha,
                                             JackknifeVariant variant,
                                             StabilityParams stability) {
  const std::size_t n = train.n();
  if (n < 2) throw std::invalid_argument("jackknife_interval: n >= 2 required");
  FoldPlan loo;
  loo.K = static_cast<int>(n);
  loo.fold_of.resize(n);
  for (std::size_t i = 0; i < n; ++i) loo.fold_of[i] = static_cast<int>(i);
  if (variant == JackknifeVariant::kPlus)
    return cv_plus_interval(fit, train, x, alpha, loo);

  std::vector<double> s(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto m = fit(train.subset(loo.complement_indices(static_cast<int>(i))));
    s[i] = std::abs(train.y[i] - m(train.x[i]));
  }
  double center = fit(train)(x);
  double q = FiniteSample(s).quantile(1.0 - alpha);
  if (variant == JackknifeVariant::kInflated) q += stability.epsilon;
  return {center - q, center + q};
}

double cc_coverage_bound(std::size_t n, int K, double alpha) {
  if (K < 1 || n % static_cast<std::size_t>(K) != 0)
    throw std::invalid_argument("cc_coverage_bound: requires K | n");
  double nd = static_cast<double>(n), Kd = static_cast<double>(K);
  double t1 = (1.0 - 1.0 / Kd) / (nd / Kd + 1.0);
  double t2 = (1.0 - Kd / nd) / (Kd + 1.0);
  return 1.0 - 2.0 * alpha - 2.0 * (1.0 - alpha) * std::min(t1, t2);
}

bool tournament_rowsum_check(const std::vector<std::vector<int>>& A,
                             double t) {
  const std::size_t N = A.size();
  for (std::size_t i = 0; i < N; ++i) {
    if (A[i].size() != N)
      throw std::invalid_argument("tournament_rowsum_check: not square");
    for (std::size_t j = 0; j < N; ++j) {
      if (A[i][j] != 0 && A[i][j] != 1)
        throw std::invalid_argument("tournament_rowsum_check: not 0/1");
      if (A[i][j] + A[j][i] > 1)
        throw std::invalid_argument(
            "tournament_rowsum_check: A_ij + A_ji <= 1 violated");
    }
  }
  std::size_t heavy = 0;
  for (std::size_t i = 0; i < N; ++i) {
    int row = 0;
    for (std::size_t j = 0; j < N; ++j) row += A[i][j];
    if (static_cast<double>(row) >= static_cast<double>(N) * (1.0 - t)) ++heavy;
  }
  return static_cast<double>(heavy) <= 2.0 * t * static_cast<double>(N);
}

}  // namespace dfp
