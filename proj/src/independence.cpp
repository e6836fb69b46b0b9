#include "dfp/independence.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>

#include "dfp/rng.hpp"

namespace dfp {

namespace {

// Enumerate every permutation that maps each group onto itself, applying fn
// to the assembled index permutation.
void for_each_group_perm(
    const std::vector<std::vector<std::size_t>>& groups,
    std::vector<std::vector<std::size_t>>& arranged, std::size_t g,
    std::vector<std::size_t>& perm,
    const std::function<void(const std::vector<std::size_t>&)>& fn) {
  if (g == groups.size()) {
    fn(perm);
    return;
  }
  std::vector<std::size_t>& arr = arranged[g];
  std::sort(arr.begin(), arr.end());
  do {
    for (std::size_t k = 0; k < arr.size(); ++k) perm[groups[g][k]] = arr[k];
    for_each_group_perm(groups, arranged, g + 1, perm, fn);
  } while (std::next_permutation(arr.begin(), arr.end()));
}

std::vector<std::vector<std::size_t>> group_by_w(const std::vector<double>& ws) {
  std::map<double, std::vector<std::size_t>> by_w;
  for (std::size_t i = 0; i < ws.size(); ++i) by_w[ws[i]].push_back(i);
  std::vector<std::vector<std::size_t>> groups;
  for (auto& [w, idx] : by_w) groups.push_back(std::move(idx));
  return groups;
}

TestResult run_permutation_test(const std::vector<double>& xs,
                                const std::vector<double>& ys,
                                const std::vector<std::vector<std::size_t>>& groups,
                                const TestStatistic& T,
                                const PermutationBudget& budget, double alpha) {
  const std::size_t n = xs.size();
  if (ys.size() != n) throw std::invalid_argument("permutation test: sizes differ");
  if (n == 0) throw std::invalid_argument("permutation test: empty input");
  double t_obs = T(xs, ys);
  TestResult out;
  if (budget.mode == PermutationBudget::Mode::kExhaustive) {
    if (n > 8)
      throw std::invalid_argument(
          "permutation test: exhaustive mode limited to n <= 8");
    std::size_t count = 0, total = 0;
    std::vector<std::size_t> perm(n);
    std::vector<std::vector<std::size_t>> arranged = groups;
    std::vector<double> xp(n);
    for_each_group_perm(groups, arranged, 0, perm,
                        [&](const std::vector<std::size_t>& p) {
                          for (std::size_t i = 0; i < n; ++i) xp[i] = xs[p[i]];
                          if (T(xp, ys) >= t_obs) ++count;
                          ++total;
                        });
    out.pvalue = static_cast<double>(count) / static_cast<double>(total);
  } else {
    Rng rng(budget.seed);
    std::size_t count = 0;
    std::vector<double> xp(n);
    for (std::size_t m = 0; m < budget.samples; ++m) {
      xp = xs;
      for (const auto& g : groups) {
        for (std::size_t i = g.size(); i > 1; --i) {
          std::size_t j = rng.below(i);
          std::swap(xp[g[i - 1]], xp[g[j]]);
        }
      }
      if (T(xp, ys) >= t_obs) ++count;
    }
    // +1 correction: the identity is always counted
    out.pvalue = static_cast<double>(1 + count) /
                 static_cast<double>(1 + budget.samples);
  }
  out.reject = out.pvalue <= alpha;
  return out;
}

}  // namespace

TestStatistic abs_correlation_statistic() {
  return [](const std::vector<double>& x, const std::vector<double>& y) {
    double n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      mx += x[i];
      my += y[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      sxy += (x[i] - mx) * (y[i] - my);
      sxx += (x[i] - mx) * (x[i] - mx);
      syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx <= 0.0 || syy <= 0.0) return 0.0;
    return std::abs(sxy / std::sqrt(sxx * syy));
  };
}

TestStatistic ks_two_sample_statistic() {
  return [](const std::vector<double>& x, const std::vector<double>& y) {
    std::vector<double> a, b;
    for (std::size_t i = 0; i < x.size(); ++i)
      (x[i] <= 0.5 ? a : b).push_back(y[i]);
    if (a.empty() || b.empty()) return 0.0;
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    double d = 0.0;
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
      double v = std::min(a[i], b[j]);
      while (i < a.size() && a[i] <= v) ++i;
      while (j < b.size() && b[j] <= v) ++j;
      d = std::max(d, std::abs(static_cast<double>(i) / a.size() -
                               static_cast<double>(j) / b.size()));
    }
    return d;
  };
}

TestResult marginal_independence_test(const std::vector<double>& xs,
                                      const std::vector<double>& ys,
                                      const TestStatistic& T,
                                      const PermutationBudget& budget,
                                      double alpha) {
  std::vector<std::size_t> all(xs.size());
  std::iota(all.begin(), all.end(), std::size_t{0});
  return run_permutation_test(xs, ys, {all}, T, budget, alpha);
}

TestResult local_permutation_test(const std::vector<double>& xs,
                                  const std::vector<double>& ys,
                                  const std::vector<double>& ws,
                                  const TestStatistic& T,
                                  const PermutationBudget& budget,
                                  double alpha) {
  if (ws.size() != xs.size())
    throw std::invalid_argument("local_permutation_test: sizes differ");
  return run_permutation_test(xs, ys, group_by_w(ws), T, budget, alpha);
}

TestResult binned_local_permutation_test(
    const std::vector<double>& xs, const std::vector<double>& ys,
    const std::vector<double>& ws, const std::function<int(double)>& bin_of_w,
    const TestStatistic& T, const PermutationBudget& budget, double alpha,
    double lipschitz_L, double bin_diameter) {
  std::vector<double> binned(ws.size());
  for (std::size_t i = 0; i < ws.size(); ++i)
    binned[i] = static_cast<double>(bin_of_w(ws[i]));
  TestResult r = local_permutation_test(xs, ys, binned, T, budget, alpha);
  r.inflation = lipschitz_L * bin_diameter *
                std::sqrt(2.0 * static_cast<double>(xs.size()));
  return r;
}

RegressionCi regression_ci(const Dataset& train,
                           const std::vector<double>& query_x, double alpha,
                           RegressionCiMethod method,
                           const RegressionCiParams& params) {
  if (!(params.a < params.b))
    throw std::invalid_argument("regression_ci: need a < b");
  std::vector<double> local;
  switch (method) {
    case RegressionCiMethod::kDiscrete:
      for (std::size_t i = 0; i < train.n(); ++i)
        if (train.x[i] == query_x) local.push_back(train.y[i]);
      break;
    case RegressionCiMethod::kBinned: {
      if (!params.bin_of)
        throw std::invalid_argument("regression_ci: bin_of required");
      int qb = params.bin_of(query_x);
      for (std::size_t i = 0; i < train.n(); ++i)
        if (params.bin_of(train.x[i]) == qb) local.push_back(train.y[i]);
      break;
    }
    case RegressionCiMethod::kBlurred: {
      if (!params.kernel.H || !(params.kernel.bound > 0.0))
        throw std::invalid_argument(
            "regression_ci: kernel with a positive bound required");
      Rng rng(params.seed);
      for (std::size_t i = 0; i < train.n(); ++i) {
        double u = rng.uniform();
        if (u <= params.kernel.H(query_x, train.x[i]) / params.kernel.bound)
          local.push_back(train.y[i]);
      }
      break;
    }
  }
  RegressionCi ci;
  ci.local_n = local.size();
  if (local.empty()) {
    ci.lo = params.a;
    ci.hi = params.b;
    return ci;
  }
  double mean = 0.0;
  for (double v : local) mean += v;
  mean /= static_cast<double>(local.size());
  double radius = (params.b - params.a) *
                  std::sqrt(std::log(2.0 / alpha) /
                            (2.0 * static_cast<double>(local.size())));
  ci.lo = std::max(params.a, mean - radius);
  ci.hi = std::min(params.b, mean + radius);
  return ci;
}

}  // namespace dfp
