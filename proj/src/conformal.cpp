#include "dfp/conformal.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "dfp/special.hpp"

namespace dfp {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<double> calibration_scores(const PointScore& s, const Dataset& cal) {
  std::vector<double> out(cal.n());
  for (std::size_t i = 0; i < cal.n(); ++i) out[i] = s(cal.x[i], cal.y[i]);
  return out;
}

// Accepted grid points -> closed intervals over contiguous runs.
PredictionSet grid_runs_to_set(const std::vector<double>& grid,
                               const std::vector<char>& accept) {
  std::vector<std::pair<double, double>> parts;
  std::size_t i = 0;
  while (i < grid.size()) {
    if (!accept[i]) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j + 1 < grid.size() && accept[j + 1]) ++j;
    parts.emplace_back(grid[i], grid[j]);
    i = j + 1;
  }
  return PredictionSet::intervals(std::move(parts));
}

}  // namespace

YDomain YDomain::from_labels(int num_labels) {
  YDomain d;
  d.kind = Kind::kLabels;
  for (int l = 0; l < num_labels; ++l) d.labels.push_back(l);
  return d;
}

YDomain YDomain::from_grid(double lo, double hi, std::size_t points) {
  if (points < 2 || !(lo < hi))
    throw std::invalid_argument("YDomain: need lo < hi and >= 2 points");
  YDomain d;
  d.kind = Kind::kGrid;
  d.grid.resize(points);
  for (std::size_t i = 0; i < points; ++i)
    d.grid[i] = lo + (hi - lo) * static_cast<double>(i) /
                         static_cast<double>(points - 1);
  return d;
}

PredictionSet set_from_domain(const YDomain& dom,
                              const std::function<bool(double)>& accept) {
  if (dom.kind == YDomain::Kind::kLabels) {
    std::vector<int> keep;
    for (int l : dom.labels)
      if (accept(static_cast<double>(l))) keep.push_back(l);
    return PredictionSet::labels(std::move(keep));
  }
  std::vector<char> acc(dom.grid.size());
  for (std::size_t i = 0; i < dom.grid.size(); ++i) acc[i] = accept(dom.grid[i]);
  return grid_runs_to_set(dom.grid, acc);
}

double split_threshold(const FiniteSample& cal_scores, double alpha) {
  double n = static_cast<double>(cal_scores.size());
  return cal_scores.quantile((1.0 - alpha) * (1.0 + 1.0 / n));
}

PredictionSet split_set(const PointScore& s, const Dataset& cal,
                        const std::vector<double>& x, double alpha,
                        const YDomain& dom) {
  if (cal.n() == 0) throw std::invalid_argument("split_set: empty calibration");
  FiniteSample scores(calibration_scores(s, cal));
  double q = split_threshold(scores, alpha);
  if (dom.kind == YDomain::Kind::kLabels) {
    std::vector<int> keep;
    for (int l : dom.labels)
      if (s(x, static_cast<double>(l)) <= q) keep.push_back(l);
    return PredictionSet::labels(std::move(keep));
  }
  if (q == kInf) return PredictionSet::all();
  std::vector<char> accept(dom.grid.size());
  for (std::size_t i = 0; i < dom.grid.size(); ++i)
    accept[i] = s(x, dom.grid[i]) <= q;
  return grid_runs_to_set(dom.grid, accept);
}

double conformal_pvalue(const std::vector<double>& scores_with_test) {
  if (scores_with_test.empty())
    throw std::invalid_argument("conformal_pvalue: empty input");
  double test = scores_with_test.back();
  std::size_t count = 0;
  for (std::size_t i = 0; i + 1 < scores_with_test.size(); ++i)
    if (scores_with_test[i] >= test) ++count;
  return static_cast<double>(1 + count) /
         static_cast<double>(scores_with_test.size());
}

double smoothed_pvalue(const std::vector<double>& scores_with_test, double xi) {
  if (scores_with_test.empty())
    throw std::invalid_argument("smoothed_pvalue: empty input");
  if (!(xi >= 0.0 && xi <= 1.0))
    throw std::invalid_argument("smoothed_pvalue: xi outside [0,1]");
  double test = scores_with_test.back();
  std::size_t above = 0, ties = 0;
  for (std::size_t i = 0; i + 1 < scores_with_test.size(); ++i) {
    if (scores_with_test[i] > test) ++above;
    if (scores_with_test[i] == test) ++ties;
  }
  // the test point ties with itself
  return (static_cast<double>(above) + xi * static_cast<double>(ties + 1)) /
         static_cast<double>(scores_with_test.size());
}

PredictionSet full_set_finite(const ScoreFn& s, const Dataset& train,
                              const std::vector<double>& x, double alpha,
                              int num_labels) {
  const std::size_t n = train.n();
  std::vector<int> keep;
  for (int label = 0; label < num_labels; ++label) {
    double y = static_cast<double>(label);
    Dataset aug = train.with_point(x, y);
    PointScore sc = s.trained_on(aug);
    std::vector<double> si(n);
    for (std::size_t i = 0; i < n; ++i) si[i] = sc(train.x[i], train.y[i]);
    double thr = split_threshold(FiniteSample(std::move(si)), alpha);
    if (sc(x, y) <= thr) keep.push_back(label);
  }
  return PredictionSet::labels(std::move(keep));
}

PredictionSet full_set_least_squares(const Dataset& train,
                                     const std::vector<double>& x,
                                     double alpha) {
  train.validate();
  const std::size_t n = train.n();
  const std::size_t d = train.dim();
  if (d == 0) throw std::invalid_argument("full_set_least_squares: d == 0");
  Eigen::MatrixXd X(n + 1, d);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < d; ++j) X(i, j) = train.x[i][j];
  for (std::size_t j = 0; j < d; ++j) X(n, j) = x[j];
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
  qr.setThreshold(1e-10);
  if (qr.rank() < X.cols())
    throw std::runtime_error("full_set_least_squares: rank-deficient design");
  // H = X (X^T X)^{-1} X^T via the thin Q factor: H = Q Q^T
  Eigen::HouseholderQR<Eigen::MatrixXd> hqr(X);
  Eigen::MatrixXd Q =
      hqr.householderQ() * Eigen::MatrixXd::Identity(n + 1, d);
  Eigen::VectorXd y0(n + 1);
  for (std::size_t i = 0; i < n; ++i) y0(i) = train.y[i];
  y0(n) = 0.0;
  Eigen::VectorXd a = Q * (Q.transpose() * y0);     // a_i = sum_{j<=n} H_ij Y_j
  Eigen::VectorXd b = Q * Q.row(n).transpose();     // b_i = H_{i,n+1}
  // Augmented residuals as lines in the hypothesized response y:
  //   i <= n:  S_i(y)  = |c_i + d_i y|, c_i = Y_i - a_i, d_i = -b_i
  //   test:    S_t(y)  = |c_t + d_t y|, c_t = -a_{n+1}, d_t = 1 - b_{n+1}
  std::vector<double> c(n), dd(n);
  for (std::size_t i = 0; i < n; ++i) {
    c[i] = train.y[i] - a(i);
    dd[i] = -b(i);
  }
  double ct = -a(n), dt = 1.0 - b(n);

  std::vector<double> roots;
  for (std::size_t i = 0; i < n; ++i) {
    for (int sgn : {+1, -1}) {
      double denom = dd[i] - sgn * dt;
      if (denom != 0.0) {
        double r = (sgn * ct - c[i]) / denom;
        if (std::isfinite(r)) roots.push_back(r);
      }
      // coincident lines: |S_i| == |S_t| on the whole cell; handled by the
      // representative-point evaluation below
    }
  }
  std::sort(roots.begin(), roots.end());
  roots.erase(std::unique(roots.begin(), roots.end()), roots.end());

  auto member = [&](double y) {
    double st = std::abs(ct + dt * y);
    std::size_t count = 0;
    for (std::size_t i = 0; i < n; ++i)
      if (std::abs(c[i] + dd[i] * y) >= st) ++count;
    return static_cast<double>(1 + count) / static_cast<double>(n + 1) > alpha;
  };

  if (roots.empty()) return member(0.0) ? PredictionSet::all()
                                        : PredictionSet::empty();

  std::vector<std::pair<double, double>> parts;
  // left unbounded cell
  if (member(roots.front() - 1.0)) parts.emplace_back(-kInf, roots.front());
  for (std::size_t k = 0; k < roots.size(); ++k) {
    if (member(roots[k])) parts.emplace_back(roots[k], roots[k]);
    if (k + 1 < roots.size()) {
      double mid = 0.5 * (roots[k] + roots[k + 1]);
      if (member(mid)) parts.emplace_back(roots[k], roots[k + 1]);
    }
  }
  if (member(roots.back() + 1.0)) parts.emplace_back(roots.back(), kInf);
  return PredictionSet::intervals(std::move(parts));
}

PredictionSet full_set_discretized(const ScoreFn& s, const Dataset& train,
                                   const std::vector<double>& x, double alpha,
                                   const std::vector<double>& grid) {
  if (grid.empty())
    throw std::invalid_argument("full_set_discretized: empty grid");
  if (!std::is_sorted(grid.begin(), grid.end()))
    throw std::invalid_argument("full_set_discretized: grid must be sorted");
  const std::size_t n = train.n();
  const std::size_t M = grid.size();
  auto round_to_grid = [&](double y) {
    auto it = std::lower_bound(grid.begin(), grid.end(), y);
    if (it == grid.end()) return M - 1;
    if (it == grid.begin()) return std::size_t{0};
    std::size_t hi = static_cast<std::size_t>(it - grid.begin());
    // ties round to the lower grid index
    return (grid[hi] - y < y - grid[hi - 1]) ? hi : hi - 1;
  };
  Dataset rounded = train;
  for (std::size_t i = 0; i < n; ++i) rounded.y[i] = grid[round_to_grid(train.y[i])];

  std::vector<char> accept(M, 0);
  for (std::size_t m = 0; m < M; ++m) {
    Dataset aug = rounded.with_point(x, grid[m]);
    PointScore sc = s.trained_on(aug);
    std::vector<double> si(n);
    for (std::size_t i = 0; i < n; ++i) si[i] = sc(rounded.x[i], rounded.y[i]);
    double thr = split_threshold(FiniteSample(std::move(si)), alpha);
    if (sc(x, grid[m]) <= thr) accept[m] = 1;
  }
  // Accepted rounding cells (Voronoi intervals of the grid); edge cells
  // extend to +-inf because the rounder is total on R.
  std::vector<std::pair<double, double>> parts;
  for (std::size_t m = 0; m < M; ++m) {
    if (!accept[m]) continue;
    double lo = (m == 0) ? -kInf : 0.5 * (grid[m - 1] + grid[m]);
    double hi = (m + 1 == M) ? kInf : 0.5 * (grid[m] + grid[m + 1]);
    parts.emplace_back(lo, hi);
  }
  return PredictionSet::intervals(std::move(parts));
}

PacLevel pac_level(std::size_t n, double alpha, double delta) {
  if (n < 1) throw std::invalid_argument("pac_level: n >= 1 required");
  if (!(alpha > 0.0 && alpha < 1.0) || !(delta > 0.0 && delta < 1.0))
    throw std::invalid_argument("pac_level: alpha, delta in (0,1) required");
  double np1 = static_cast<double>(n) + 1.0;
  auto f = [&](double ap) {
    return beta_cdf(1.0 - alpha, (1.0 - ap) * np1, ap * np1);
  };
  // f is increasing in alpha'; if even alpha' = alpha cannot reach delta,
  // report the boundary with a flag.
  if (f(alpha) < delta) return {alpha, true};
  double lo = 1e-12, hi = alpha;
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    double v = f(mid);
    if (std::abs(v - delta) <= 1e-10) return {mid, false};
    if (v < delta)
      lo = mid;
    else
      hi = mid;
  }
  return {0.5 * (lo + hi), false};
}

}  // namespace dfp
