#include "dfp/weighted.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "dfp/quantile.hpp"

namespace dfp {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

// All n+1 scores for a hypothesized y (test score last).
std::vector<double> augmented_scores(const ScoreFn& s, const Dataset& train,
                                     const std::vector<double>& x, double y) {
  Dataset aug = train.with_point(x, y);
  PointScore sc = s.trained_on(aug);
  std::vector<double> out(train.n() + 1);
  for (std::size_t i = 0; i < train.n(); ++i) out[i] = sc(train.x[i], train.y[i]);
  out[train.n()] = sc(x, y);
  return out;
}

std::vector<double> normalize(std::vector<double> r) {
  double total = 0.0;
  for (double v : r) {
    if (!(v >= 0.0) || !std::isfinite(v))
      throw std::invalid_argument("weights: ratios must be finite and >= 0");
    total += v;
  }
  if (total <= 0.0) throw std::invalid_argument("weights: all ratios are zero");
  for (double& v : r) v /= total;
  return r;
}

}  // namespace

double LikelihoodRatio::ratio(const std::vector<double>& x, double y) const {
  switch (kind) {
    case Kind::kCovariate:
      return wx(x);
    case Kind::kLabel:
      return wy(y);
    case Kind::kJoint:
      return wxy(x, y);
  }
  return 0.0;
}

LikelihoodRatio LikelihoodRatio::covariate(
    std::function<double(const std::vector<double>&)> f) {
  LikelihoodRatio lr;
  lr.kind = Kind::kCovariate;
  lr.wx = std::move(f);
  return lr;
}

LikelihoodRatio LikelihoodRatio::label(std::function<double(double)> f) {
  LikelihoodRatio lr;
  lr.kind = Kind::kLabel;
  lr.wy = std::move(f);
  return lr;
}

LikelihoodRatio LikelihoodRatio::joint(
    std::function<double(const std::vector<double>&, double)> f) {
  LikelihoodRatio lr;
  lr.kind = Kind::kJoint;
  lr.wxy = std::move(f);
  return lr;
}

std::vector<double> shift_weights(const LikelihoodRatio& lr,
                                  const Dataset& train,
                                  const std::vector<double>& test_x,
                                  double hyp_y) {
  std::vector<double> r(train.n() + 1);
  for (std::size_t i = 0; i < train.n(); ++i)
    r[i] = lr.ratio(train.x[i], train.y[i]);
  r[train.n()] = lr.ratio(test_x, hyp_y);
  return normalize(std::move(r));
}

PredictionSet weighted_full_set(const ScoreFn& s, const Dataset& train,
                                const std::vector<double>& x, double alpha,
                                const LikelihoodRatio& lr, const YDomain& dom) {
  auto accept = [&](double y) {
    std::vector<double> scores = augmented_scores(s, train, x, y);
    std::vector<double> w = shift_weights(lr, train, x, y);
    double q = WeightedEmpirical(scores, w).quantile(1.0 - alpha);
    return scores.back() <= q;
  };
  return set_from_domain(dom, accept);
}

PredictionSet weighted_split_set(const PointScore& s, const Dataset& cal,
                                 const std::vector<double>& x, double alpha,
                                 const LikelihoodRatio& lr, const YDomain& dom) {
  if (lr.kind != LikelihoodRatio::Kind::kCovariate)
    throw std::invalid_argument(
        "weighted_split_set: requires a covariate-shift likelihood ratio");
  const std::size_t n = cal.n();
  std::vector<double> values(n + 1), ratios(n + 1);
  for (std::size_t i = 0; i < n; ++i) {
    values[i] = s(cal.x[i], cal.y[i]);
    ratios[i] = lr.ratio(cal.x[i], 0.0);
  }
  values[n] = kInf;  // test atom
  ratios[n] = lr.ratio(x, 0.0);
  std::vector<double> w = normalize(std::move(ratios));
  double q = WeightedEmpirical(values, w).quantile(1.0 - alpha);
  if (q == kInf) return dom.kind == YDomain::Kind::kLabels
                            ? set_from_domain(dom, [](double) { return true; })
                            : PredictionSet::all();
  return set_from_domain(dom, [&](double y) { return s(x, y) <= q; });
}

PredictionSet fixed_weight_set(const ScoreFn& s, const Dataset& train,
                               const std::vector<double>& x, double alpha,
                               const std::vector<double>& w,
                               const YDomain& dom) {
  const std::size_t n = train.n();
  if (w.size() != n + 1)
    throw std::invalid_argument("fixed_weight_set: need n+1 weights");
  double total = 0.0, wmax = 0.0;
  for (double v : w) {
    if (!(v >= 0.0)) throw std::invalid_argument("fixed_weight_set: w >= 0");
    total += v;
    wmax = std::max(wmax, v);
  }
  if (std::abs(total - 1.0) > 1e-9)
    throw std::invalid_argument("fixed_weight_set: weights must sum to 1");
  if (w[n] < wmax)
    throw std::invalid_argument(
        "fixed_weight_set: test weight must be >= max_i w_i");
  auto accept = [&](double y) {
    std::vector<double> scores = augmented_scores(s, train, x, y);
    double q = WeightedEmpirical(scores, w).quantile(1.0 - alpha);
    return scores.back() <= q;
  };
  return set_from_domain(dom, accept);
}

PredictionSet localized_set(const ScoreFn& s, const Dataset& train,
                            const std::vector<double>& x, double alpha,
                            const LocalizationKernel& kernel,
                            const YDomain& dom) {
  const std::size_t n = train.n();
  // kernel weights do not depend on the hypothesized y; compute once
  std::vector<std::vector<double>> w(n + 1, std::vector<double>(n + 1));
  auto xs = [&](std::size_t i) -> const std::vector<double>& {
    return i < n ? train.x[i] : x;
  };
  for (std::size_t i = 0; i <= n; ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j <= n; ++j) {
      double h = kernel.H(xs(j), xs(i));
      if (!(h >= 0.0))
        throw std::invalid_argument("localized_set: kernel must be >= 0");
      w[i][j] = h;
      row += h;
    }
    if (row <= 0.0) throw std::invalid_argument("localized_set: zero kernel row");
    for (std::size_t j = 0; j <= n; ++j) w[i][j] /= row;
  }
  auto accept = [&](double y) {
    std::vector<double> scores = augmented_scores(s, train, x, y);
    std::vector<double> recal(n + 1, 0.0);
    for (std::size_t i = 0; i <= n; ++i)
      for (std::size_t j = 0; j <= n; ++j)
        if (scores[j] < scores[i]) recal[i] += w[i][j];
    double q = FiniteSample(recal).quantile(1.0 - alpha);
    return recal[n] <= q;
  };
  return set_from_domain(dom, accept);
}

std::pair<PredictionSet, std::vector<double>> randomly_localized_set(
    const ScoreFn& s, const Dataset& train, const std::vector<double>& x,
    double alpha, const LocalizationKernel& kernel, uint64_t seed,
    const YDomain& dom) {
  if (!kernel.sampler)
    throw std::invalid_argument("randomly_localized_set: sampler required");
  Rng rng(seed);
  std::vector<double> x_tilde = kernel.sampler(x, rng);
  const std::size_t n = train.n();
  std::vector<double> ratios(n + 1);
  for (std::size_t i = 0; i < n; ++i) ratios[i] = kernel.H(train.x[i], x_tilde);
  ratios[n] = kernel.H(x, x_tilde);
  std::vector<double> w = normalize(std::move(ratios));
  auto accept = [&](double y) {
    std::vector<double> scores = augmented_scores(s, train, x, y);
    double q = WeightedEmpirical(scores, w).quantile(1.0 - alpha);
    return scores.back() <= q;
  };
  return {set_from_domain(dom, accept), x_tilde};
}

}  // namespace dfp
