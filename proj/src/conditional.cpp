#include "dfp/conditional.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

#include "dfp/quantile.hpp"

namespace dfp {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

PredictionSet mondrian_set(const ScoreFn& s, const Dataset& train,
                           const std::vector<double>& x, double alpha,
                           const GroupFn& g, const YDomain& dom) {
  const std::size_t n = train.n();
  // group ids of the calibration points are fixed; compute once
  std::vector<int> gid(n);
  for (std::size_t i = 0; i < n; ++i) gid[i] = g.g(train.x[i], train.y[i]);

  PointScore pre;
  std::vector<double> pre_scores;
  if (s.is_pretrained()) {
    pre = s.pretrained;
    pre_scores.resize(n);
    for (std::size_t i = 0; i < n; ++i) pre_scores[i] = pre(train.x[i], train.y[i]);
  }

  auto accept = [&](double y) {
    int gy = g.g(x, y);
    std::vector<double> group_scores;
    double test_score;
    if (s.is_pretrained()) {
      for (std::size_t i = 0; i < n; ++i)
        if (gid[i] == gy) group_scores.push_back(pre_scores[i]);
      test_score = pre(x, y);
    } else {
      Dataset aug = train.with_point(x, y);
      PointScore sc = s.trained_on(aug);
      for (std::size_t i = 0; i < n; ++i)
        if (gid[i] == gy) group_scores.push_back(sc(train.x[i], train.y[i]));
      test_score = sc(x, y);
    }
    if (group_scores.empty()) return true;  // empty group -> threshold +inf
    double m = static_cast<double>(group_scores.size());
    double thr = FiniteSample(std::move(group_scores))
                     .quantile((1.0 - alpha) * (1.0 + 1.0 / m));
    return test_score <= thr;
  };
  return set_from_domain(dom, accept);
}

std::vector<double> binwise_split_thresholds(
    const Dataset& cal, const PointScore& s,
    const std::function<int(const std::vector<double>&)>& bin_of, int num_bins,
    double alpha) {
  if (num_bins < 1)
    throw std::invalid_argument("binwise_split_thresholds: num_bins >= 1");
  std::vector<std::vector<double>> per_bin(num_bins);
  for (std::size_t i = 0; i < cal.n(); ++i) {
    int b = bin_of(cal.x[i]);
    if (b < 0 || b >= num_bins)
      throw std::out_of_range("binwise_split_thresholds: bin out of range");
    per_bin[b].push_back(s(cal.x[i], cal.y[i]));
  }
  std::vector<double> thr(num_bins, kInf);
  for (int b = 0; b < num_bins; ++b) {
    if (per_bin[b].empty()) continue;
    double nk = static_cast<double>(per_bin[b].size());
    thr[b] = FiniteSample(std::move(per_bin[b]))
                 .quantile((1.0 - alpha) * (1.0 + 1.0 / nk));
  }
  return thr;
}

PredictionSet selective_set(const ScoreFn& s, const Dataset& train,
                            const std::vector<double>& x, double alpha,
                            const SelectionRule& rule, const YDomain& dom) {
  const std::size_t n = train.n();
  auto accept = [&](double y) {
    Dataset aug = train.with_point(x, y);
    std::vector<std::size_t> sel = rule(aug);
    bool test_selected = false;
    std::vector<std::size_t> sel_train;
    for (std::size_t i : sel) {
      if (i == n)
        test_selected = true;
      else if (i < n)
        sel_train.push_back(i);
      else
        throw std::out_of_range("selective_set: selection index out of range");
    }
    if (!test_selected) return false;
    if (sel_train.empty()) return true;  // empty selection -> threshold +inf
    PointScore sc = s.trained_on(aug);
    std::vector<double> scores;
    scores.reserve(sel_train.size());
    for (std::size_t i : sel_train) scores.push_back(sc(train.x[i], train.y[i]));
    double m = static_cast<double>(scores.size());
    double thr = FiniteSample(std::move(scores))
                     .quantile((1.0 - alpha) * (1.0 + 1.0 / m));
    return sc(x, y) <= thr;
  };
  return set_from_domain(dom, accept);
}

}  // namespace dfp
