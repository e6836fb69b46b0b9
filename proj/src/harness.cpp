#include "dfp/harness.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <cstring>
#include <functional>
#include <limits>
#include <map>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "dfp/aggregate.hpp"
#include "dfp/calibration.hpp"
#include "dfp/conformal.hpp"
#include "dfp/crossval.hpp"
#include "dfp/independence.hpp"
#include "dfp/online.hpp"
#include "dfp/predictor.hpp"
#include "dfp/quantile.hpp"
#include "dfp/risk.hpp"
#include "dfp/rng.hpp"
#include "dfp/score.hpp"
#include "dfp/special.hpp"
#include "dfp/weighted.hpp"

#ifdef DFP_HAVE_OPENMP
#include <omp.h>
#endif

namespace dfp {

namespace {

using nlohmann::json;

constexpr double kInf = std::numeric_limits<double>::infinity();

// Trials write into disjoint slots of preallocated vectors, so the parallel
// and serial paths aggregate identical numbers in identical order.
template <class F>
void for_each_trial(std::size_t R, bool parallel, F&& body) {
#ifdef DFP_HAVE_OPENMP
  if (parallel) {
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < static_cast<long long>(R); ++i)
      body(static_cast<std::size_t>(i));
    return;
  }
#else
  (void)parallel;
#endif
  for (std::size_t i = 0; i < R; ++i) body(i);
}

double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

double var_of(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  double m = mean_of(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return s / static_cast<double>(v.size() - 1);
}

double binom3sigma(double p, std::size_t R) {
  return 3.0 * std::sqrt(p * (1.0 - p) / static_cast<double>(R));
}

// Fenwick tree used to turn a score stream into sequential conformal
// p-values in O(T log T) per run.
class Fenwick {
 public:
  explicit Fenwick(std::size_t n) : tree_(n + 1, 0) {}
  void add(std::size_t i) {  // 1-based
    for (; i < tree_.size(); i += i & (~i + 1)) ++tree_[i];
  }
  int prefix(std::size_t i) const {  // count of inserted ranks <= i
    int s = 0;
    for (; i > 0; i -= i & (~i + 1)) s += tree_[i];
    return s;
  }

 private:
  std::vector<int> tree_;
};

// p_t = #{i <= t : S_i >= S_t} / t for the whole stream at once.
std::vector<double> stream_pvalues(const std::vector<double>& s) {
  const std::size_t T = s.size();
  std::vector<std::size_t> order(T);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (s[a] != s[b]) return s[a] < s[b];
    return a < b;
  });
  std::vector<std::size_t> rank(T);
  for (std::size_t r = 0; r < T; ++r) rank[order[r]] = r + 1;
  Fenwick bit(T);
  std::vector<double> p(T);
  for (std::size_t t = 0; t < T; ++t) {
    bit.add(rank[t]);
    // ranks are distinct, so #{S_i >= S_t} = (t+1) - #{rank < rank_t}
    p[t] = static_cast<double>(static_cast<int>(t + 1) -
                               bit.prefix(rank[t] - 1)) /
           static_cast<double>(t + 1);
  }
  return p;
}

SuiteReport empty_report(const std::string& id) {
  SuiteReport r;
  r.suite = id;
  r.params = json{{"trials", 0}};
  r.band = "empty report (0 trials)";
  r.pass = false;
  r.details = json::object();
  return r;
}

// ---------------------------------------------------------------- suite 1
SuiteReport suite_split_coverage(std::size_t R, uint64_t seed, bool parallel) {
  const std::size_t n = 99;
  const double alpha = 0.1;
  std::vector<double> bits(R);
  for_each_trial(R, parallel, [&](std::size_t i) {
    Rng rng(split_seed(seed, i));
    std::vector<double> cal(n);
    for (double& v : cal) v = rng.normal();
    double test = rng.normal();
    double q = split_threshold(FiniteSample(cal), alpha);
    bits[i] = test <= q ? 1.0 : 0.0;
  });
  SuiteReport r;
  r.suite = "split-coverage";
  r.params = {{"trials", R}, {"n", n}, {"alpha", alpha}, {"seed", seed}};
  r.estimate = mean_of(bits);
  double tol = binom3sigma(0.9, R);
  r.band = "coverage in [0.900, 0.910] +- 3sigma binomial";
  r.pass = r.estimate >= 0.900 - tol && r.estimate <= 0.910 + tol;
  r.details = {{"tolerance", tol}, {"lower", 0.900 - tol}, {"upper", 0.910 + tol}};
  return r;
}

// ---------------------------------------------------------------- suite 2
SuiteReport suite_beta_law(std::size_t R, uint64_t seed, bool parallel) {
  const std::size_t n = 99;
  const double alpha = 0.1;
  std::vector<double> cc(R);  // conditional coverage per trial
  for_each_trial(R, parallel, [&](std::size_t i) {
    Rng rng(split_seed(seed, i));
    std::vector<double> cal(n);
    for (double& v : cal) v = rng.normal();
    double q = split_threshold(FiniteSample(cal), alpha);
    cc[i] = normal_cdf(q);  // exact conditional coverage for N(0,1) scores
  });
  double m = mean_of(cc), v = var_of(cc);
  double v0 = 0.9 * 0.1 / 101.0;
  // KS distance against Beta((1-alpha)(n+1), alpha(n+1)) = Beta(90, 10)
  std::vector<double> sorted = cc;
  std::sort(sorted.begin(), sorted.end());
  double D = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    double F = beta_cdf(sorted[i], 90.0, 10.0);
    double lo = static_cast<double>(i) / static_cast<double>(R);
    double hi = static_cast<double>(i + 1) / static_cast<double>(R);
    D = std::max({D, F - lo, hi - F});
  }
  double ksp = ks_pvalue(D, static_cast<int>(R));
  SuiteReport r;
  r.suite = "beta-law";
  r.params = {{"trials", R}, {"n", n}, {"alpha", alpha}, {"seed", seed}};
  r.estimate = m;
  r.band = "mean within 0.003 of 0.9; var within 20% of 0.09/101; KS p > 0.001";
  r.pass = std::abs(m - 0.9) <= 0.003 && std::abs(v - v0) <= 0.2 * v0 &&
           ksp > 0.001;
  r.details = {{"mean", m}, {"variance", v}, {"target_variance", v0},
               {"ks_statistic", D}, {"ks_pvalue", ksp}};
  return r;
}

// ---------------------------------------------------------------- suite 3
SuiteReport suite_smoothed_uniform(std::size_t R, uint64_t seed, bool parallel) {
  const std::size_t n = 99;
  std::vector<double> pv(R);
  for_each_trial(R, parallel, [&](std::size_t i) {
    Rng rng(split_seed(seed, i));
    std::vector<double> scores(n + 1);
    // heavy ties: scores supported on {0,...,9}
    for (double& v : scores) v = std::floor(10.0 * rng.uniform());
    pv[i] = smoothed_pvalue(scores, rng.uniform());
  });
  std::sort(pv.begin(), pv.end());
  double worst_sigma = 0.0, worst_tau = 0.0;
  bool ok = true;
  for (int j = 1; j <= 99; ++j) {
    double tau = static_cast<double>(j) / 100.0;
    double Fhat =
        static_cast<double>(std::upper_bound(pv.begin(), pv.end(), tau) -
                            pv.begin()) /
        static_cast<double>(R);
    double sd = std::sqrt(tau * (1.0 - tau) / static_cast<double>(R));
    double z = std::abs(Fhat - tau) / sd;
    if (z > worst_sigma) {
      worst_sigma = z;
      worst_tau = tau;
    }
    if (z > 3.0) ok = false;
  }
  SuiteReport r;
  r.suite = "smoothed-uniform";
  r.params = {{"trials", R}, {"n", n}, {"seed", seed}};
  r.estimate = worst_sigma;
  r.band = "|F(tau) - tau| <= 3 sigma on the 99-point tau grid";
  r.pass = ok;
  r.details = {{"worst_tau", worst_tau}, {"worst_sigma_units", worst_sigma}};
  return r;
}

// ---------------------------------------------------------------- suite 4
// Independent oracle: direct normal-equation refit at every grid candidate.
bool ls_grid_member(const Eigen::MatrixXd& X, const Eigen::VectorXd& y0,
                    double y, double alpha) {
  const auto m = X.rows();
  Eigen::VectorXd ya = y0;
  ya(m - 1) = y;
  Eigen::VectorXd beta =
      (X.transpose() * X).ldlt().solve(X.transpose() * ya);
  Eigen::VectorXd res = ya - X * beta;
  double st = std::abs(res(m - 1));
  int count = 0;
  for (Eigen::Index i = 0; i + 1 < m; ++i)
    if (std::abs(res(i)) >= st) ++count;
  return static_cast<double>(1 + count) / static_cast<double>(m) > alpha;
}

SuiteReport suite_ls_full_cp(std::size_t R, uint64_t seed, bool parallel) {
  const std::size_t n = 20;
  const double alpha = 0.1;
  const double lo = -15.0, hi = 15.0;
  const std::size_t M = 10001;
  const double step = (hi - lo) / static_cast<double>(M - 1);
  std::vector<double> okv(R);
  for_each_trial(R, parallel, [&](std::size_t idx) {
    Rng rng(split_seed(seed, idx));
    Dataset train;
    for (std::size_t i = 0; i < n; ++i) {
      double z = rng.normal();
      train.add({1.0, z}, 1.0 + 2.0 * z + rng.normal());
    }
    std::vector<double> xt = {1.0, rng.normal()};
    PredictionSet closed = full_set_least_squares(train, xt, alpha);

    Eigen::MatrixXd X(n + 1, 2);
    Eigen::VectorXd y0(n + 1);
    for (std::size_t i = 0; i < n; ++i) {
      X(static_cast<Eigen::Index>(i), 0) = train.x[i][0];
      X(static_cast<Eigen::Index>(i), 1) = train.x[i][1];
      y0(static_cast<Eigen::Index>(i)) = train.y[i];
    }
    X(n, 0) = xt[0];
    X(n, 1) = xt[1];
    y0(n) = 0.0;

    std::vector<char> member(M);
    for (std::size_t m = 0; m < M; ++m)
      member[m] = ls_grid_member(X, y0, lo + step * static_cast<double>(m),
                                 alpha);

    std::vector<double> closed_bounds;
    for (const auto& p : closed.parts()) {
      if (std::isfinite(p.first)) closed_bounds.push_back(p.first);
      if (std::isfinite(p.second)) closed_bounds.push_back(p.second);
    }
    std::vector<double> oracle_bounds;
    for (std::size_t m = 0; m + 1 < M; ++m)
      if (member[m] != member[m + 1])
        oracle_bounds.push_back(lo + step * (static_cast<double>(m) + 0.5));

    bool ok = true;
    // every boundary of one representation is matched by the other
    for (double b : closed_bounds) {
      bool hit = false;
      for (double o : oracle_bounds)
        if (std::abs(b - o) <= 1.5 * step) hit = true;
      if (!hit && b > lo + step && b < hi - step) ok = false;
    }
    for (double o : oracle_bounds) {
      bool hit = false;
      for (double b : closed_bounds)
        if (std::abs(b - o) <= 1.5 * step) hit = true;
      if (!hit) ok = false;
    }
    // membership agrees away from the closed-form boundaries
    for (std::size_t m = 0; m < M; ++m) {
      double y = lo + step * static_cast<double>(m);
      bool near = false;
      for (double b : closed_bounds)
        if (std::abs(y - b) <= step) near = true;
      if (near) continue;
      if (static_cast<bool>(member[m]) != closed.contains(y)) ok = false;
    }
    okv[idx] = ok ? 1.0 : 0.0;
  });
  SuiteReport r;
  r.suite = "ls-full-cp";
  r.params = {{"trials", R}, {"n", n}, {"alpha", alpha},
              {"grid_points", M}, {"seed", seed}};
  r.estimate = mean_of(okv);
  r.band = "closed-form set matches the grid oracle within one grid step";
  r.pass = r.estimate == 1.0;
  r.details = {{"grid_step", step}};
  return r;
}

// ---------------------------------------------------------------- suite 5
RegressionFitter ls_fitter() {
  return [](const Dataset& d) {
    PredictorSpec spec;
    spec.kind = PredictorKind::kLeastSquares;
    Predictor p = Predictor::fit(spec, d);
    return [p](const std::vector<double>& x) { return p.predict(x); };
  };
}

bool crossval_nesting_check(uint64_t seed) {
  const double alpha = 0.1;
  PredictorSpec spec;
  spec.kind = PredictorKind::kLeastSquares;
  ScoreFn score = ScoreFn::from_recipe(residual_refit(spec));
  YDomain dom = YDomain::from_grid(-20.0, 20.0, 801);
  for (std::size_t inst = 0; inst < 100; ++inst) {
    Rng rng(split_seed(seed, inst));
    Dataset train;
    for (std::size_t i = 0; i < 30; ++i) {
      double z = rng.normal();
      train.add({z}, 2.0 + z + rng.normal());
    }
    std::vector<double> xt = {rng.normal()};
    FoldPlan folds = FoldPlan::make(30, 5, split_seed(seed, 100000 + inst));
    PredictionSet cc = cross_conformal_set(score, train, xt, alpha, folds, dom);
    auto [lo, hi] = cv_plus_interval(ls_fitter(), train, xt, alpha, folds);
    for (double y : dom.grid)
      if (cc.contains(y) && (y < lo || y > hi)) return false;
  }
  return true;
}

bool tournament_fixture_check(std::size_t& heavy_out) {
  // 10 players: a 7-vertex regular tournament (each of the first 7 beats the
  // next 3 cyclically) plus first-7 beat all of the last 3. Rows 0..6 get row
  // sum 6 = N(1-t) with t = 0.4, so exactly 7 = 2t N - 1 heavy rows.
  const std::size_t N = 10;
  std::vector<std::vector<int>> A(N, std::vector<int>(N, 0));
  for (std::size_t i = 0; i < 7; ++i) {
    for (std::size_t k = 1; k <= 3; ++k) A[i][(i + k) % 7] = 1;
    for (std::size_t j = 7; j < N; ++j) A[i][j] = 1;
  }
  double t = 0.4;
  std::size_t heavy = 0;
  for (std::size_t i = 0; i < N; ++i) {
    int row = 0;
    for (std::size_t j = 0; j < N; ++j) row += A[i][j];
    if (static_cast<double>(row) >= static_cast<double>(N) * (1.0 - t))
      ++heavy;
  }
  heavy_out = heavy;
  return heavy == 7 && tournament_rowsum_check(A, t);
}

SuiteReport suite_crossval(std::size_t R, uint64_t seed, bool parallel) {
  const std::size_t n = 50;
  const double alpha = 0.1;
  std::vector<double> bits(R);
  for_each_trial(R, parallel, [&](std::size_t i) {
    Rng rng(split_seed(seed, i));
    Dataset train;
    for (std::size_t k = 0; k < n; ++k) {
      double z = rng.normal();
      train.add({z}, 1.0 + z + rng.normal());
    }
    double zt = rng.normal();
    double yt = 1.0 + zt + rng.normal();
    auto [lo, hi] = jackknife_interval(ls_fitter(), train, {zt}, alpha,
                                       JackknifeVariant::kPlus);
    bits[i] = (yt >= lo && yt <= hi) ? 1.0 : 0.0;
  });
  bool nesting = crossval_nesting_check(split_seed(seed, 1u << 20));
  std::size_t heavy = 0;
  bool tournament = tournament_fixture_check(heavy);
  double tol = binom3sigma(0.8, R);
  SuiteReport r;
  r.suite = "crossval";
  r.params = {{"trials", R}, {"n", n}, {"alpha", alpha}, {"seed", seed}};
  r.estimate = mean_of(bits);
  r.band = "jackknife+ coverage >= 0.8 - 0.012; CC within CV+; heavy-row count = 7";
  r.pass = r.estimate >= 0.8 - 0.012 && nesting && tournament;
  r.details = {{"jackknife_plus_coverage", r.estimate},
               {"coverage_3sigma", tol},
               {"nesting_ok", nesting},
               {"tournament_ok", tournament},
               {"heavy_rows", heavy}};
  return r;
}

// ---------------------------------------------------------------- suite 6
SuiteReport suite_covariate_shift(std::size_t R, uint64_t seed, bool parallel) {
  const std::size_t n = 100;
  const double alpha = 0.1;
  auto sigma = [](double x) { return 0.5 + std::abs(x); };
  LikelihoodRatio lr = LikelihoodRatio::covariate(
      [](const std::vector<double>& x) { return std::exp(x[0] - 0.5); });
  std::vector<double> bw(R), bu(R);
  for_each_trial(R, parallel, [&](std::size_t i) {
    Rng rng(split_seed(seed, i));
    Dataset cal;
    std::vector<double> scores(n);
    for (std::size_t k = 0; k < n; ++k) {
      double x = rng.normal();
      double y = sigma(x) * rng.normal();
      cal.add({x}, y);
      scores[k] = std::abs(y);
    }
    double xt = 1.0 + rng.normal();  // test covariate from the shifted law
    double yt = sigma(xt) * rng.normal();
    double st = std::abs(yt);
    // weighted split: the test atom sits at +inf with its own weight
    std::vector<double> w = shift_weights(lr, cal, {xt}, 0.0);
    std::vector<double> atoms = scores;
    atoms.push_back(kInf);
    double qw = WeightedEmpirical(atoms, w).quantile(1.0 - alpha);
    bw[i] = st <= qw ? 1.0 : 0.0;
    double qu = split_threshold(FiniteSample(scores), alpha);
    bu[i] = st <= qu ? 1.0 : 0.0;
  });
  double cov_w = mean_of(bw), cov_u = mean_of(bu);
  double tol = binom3sigma(0.9, R);
  SuiteReport r;
  r.suite = "covariate-shift";
  r.params = {{"trials", R}, {"n", n}, {"alpha", alpha}, {"seed", seed}};
  r.estimate = cov_w;
  r.band = "weighted coverage >= 0.9 - 0.012; unweighted significantly below 0.9";
  r.pass = cov_w >= 0.9 - 0.012 && cov_u < 0.9 - tol;
  r.details = {{"weighted_coverage", cov_w},
               {"unweighted_coverage", cov_u},
               {"binomial_3sigma", tol}};
  return r;
}

// ---------------------------------------------------------------- suite 7
double tracker_stream_value(std::size_t stream, std::size_t t, double q,
                            Rng& rng) {
  switch (stream) {
    case 0: return 1.0;
    case 1: return 0.0;
    case 2: return (t % 2 == 0) ? 1.0 : 0.0;
    case 3: return ((t / 1000) % 2 == 0) ? 1.0 : 0.0;
    case 4: return q < 0.5 ? 1.0 : 0.0;  // adaptive adversary
    case 5: return rng.uniform();
    case 6: return static_cast<double>(t % 1000) / 1000.0;
    case 7: {
      double s = std::sin(0.01 * static_cast<double>(t));
      return s * s;
    }
    case 8: return 0.5 + 0.5 * std::sin(1e-4 * static_cast<double>(t) +
                                        3.0 * rng.uniform());
    default: return rng.uniform() < 0.05 ? 1.0 : 0.2 * rng.uniform();
  }
}

SuiteReport suite_tracker(std::size_t R, uint64_t seed, bool parallel) {
  const std::size_t T = 100000;
  const double alpha = 0.1, B = 1.0;
  std::vector<double> worst(R * 2, 0.0);
  for_each_trial(R * 2, parallel, [&](std::size_t job) {
    std::size_t stream = job / 2;
    bool poly = (job % 2) == 1;
    EtaSchedule eta = poly ? polynomial_eta(1.0, 0.6) : constant_eta(0.05);
    QuantileTracker tr(alpha, B, eta, 0.0);
    Rng rng(split_seed(seed, job));
    double err_sum = 0.0;
    double w = 0.0;
    for (std::size_t t = 1; t <= T; ++t) {
      double score = tracker_stream_value(stream, t, tr.q(), rng);
      err_sum += tr.step(score);
      double dev = std::abs(err_sum / static_cast<double>(t) - alpha);
      double bound = tracker_longrun_bound(B, eta, t);
      double ratio = dev / bound;
      if (ratio > w) w = ratio;
    }
    worst[job] = w;
  });
  double w = 0.0;
  for (double v : worst) w = std::max(w, v);
  SuiteReport r;
  r.suite = "tracker-envelope";
  r.params = {{"streams", R}, {"T", T}, {"alpha", alpha}, {"B", B},
              {"seed", seed}};
  r.estimate = w;
  r.band = "every prefix deviation within (B+eta_1)/(eta_T T), zero tolerance";
  r.pass = w <= 1.0;
  r.details = {{"worst_deviation_ratio", w}};
  return r;
}

// ---------------------------------------------------------------- suite 8
SuiteReport suite_martingale(std::size_t R, uint64_t seed, bool parallel) {
  const std::size_t T = 1000;
  const double alpha = 0.05;
  auto betting = simple_betting(0.5);
  std::vector<char> alarms(R, 0);
  for_each_trial(R, parallel, [&](std::size_t i) {
    Rng rng(split_seed(seed, i));
    std::vector<double> s(T);
    for (double& v : s) v = rng.normal();
    Martingale mg(betting, alpha);
    for (double p : stream_pvalues(s)) mg.update(p);
    alarms[i] = mg.alarm() ? 1 : 0;
  });
  double rate = 0.0;
  for (char a : alarms) rate += a;
  rate /= static_cast<double>(R);

  const std::size_t Rp = std::max<std::size_t>(1, R / 10);
  std::vector<char> fired(Rp, 0);
  for_each_trial(Rp, parallel, [&](std::size_t i) {
    Rng rng(split_seed(seed ^ 0x5151515151515151ull, i));
    std::vector<double> s(T);
    for (std::size_t t = 0; t < T; ++t)
      s[t] = rng.normal() + (t >= T / 2 ? 2.0 : 0.0);
    Martingale mg(betting, alpha);
    for (double p : stream_pvalues(s)) mg.update(p);
    fired[i] = mg.alarm() ? 1 : 0;
  });
  double power = 0.0;
  for (char a : fired) power += a;
  power /= static_cast<double>(Rp);

  double tol = binom3sigma(alpha, R);
  SuiteReport r;
  r.suite = "martingale";
  r.params = {{"trials", R}, {"T", T}, {"alpha", alpha}, {"lambda", 0.5},
              {"seed", seed}};
  r.estimate = rate;
  r.band = "false-alarm rate <= 0.05 + 3sigma; changepoint power >= 0.9";
  r.pass = rate <= alpha + tol && power >= 0.9;
  r.details = {{"false_alarm_rate", rate}, {"tolerance", alpha + tol},
               {"power", power}, {"power_runs", Rp}};
  return r;
}

// ---------------------------------------------------------------- suite 9
SuiteReport suite_risk_control(std::size_t R, uint64_t seed, bool parallel) {
  const std::size_t n = 200;
  constexpr std::size_t d = 5;
  const double alpha = 0.1;
  std::vector<double> losses(R);
  for_each_trial(R, parallel, [&](std::size_t i) {
    Rng rng(split_seed(seed, i));
    std::vector<std::array<double, d>> Y(n + 1);
    for (auto& row : Y)
      for (double& v : row) v = rng.normal();
    MonotoneLossFamily fam;
    fam.n = n;
    fam.lambda_min = 0.0;
    fam.lambda_max = 6.0;
    fam.loss = [&](std::size_t k, double lam) {
      int miss = 0;
      for (double v : Y[k])
        if (std::abs(v) > lam) ++miss;
      return static_cast<double>(miss) / static_cast<double>(d);
    };
    double lam = risk_calibrate(fam, alpha).lambda_hat;
    int miss = 0;
    for (double v : Y[n])
      if (std::abs(v) > lam) ++miss;
    losses[i] = static_cast<double>(miss) / static_cast<double>(d);
  });
  // split-equivalence: with the miscoverage loss on the score grid, the
  // calibrated lambda is the split threshold bit for bit
  const std::size_t inst = 1000, m = 50;
  std::vector<char> equal(inst, 0);
  for_each_trial(inst, parallel, [&](std::size_t i) {
    Rng rng(split_seed(seed ^ 0xC0FFEE1234567890ull, i));
    std::vector<double> s(m);
    for (double& v : s) v = rng.uniform();
    MonotoneLossFamily fam;
    fam.n = m;
    fam.grid = s;
    fam.lambda_min = *std::min_element(s.begin(), s.end());
    fam.lambda_max = *std::max_element(s.begin(), s.end());
    fam.loss = [&s](std::size_t k, double lam) {
      return s[k] > lam ? 1.0 : 0.0;
    };
    double lam = risk_calibrate(fam, alpha).lambda_hat;
    equal[i] = (lam == split_threshold(FiniteSample(s), alpha)) ? 1 : 0;
  });
  bool all_equal = true;
  for (char e : equal) all_equal = all_equal && e;
  SuiteReport r;
  r.suite = "risk-control";
  r.params = {{"trials", R}, {"n", n}, {"coords", d}, {"alpha", alpha},
              {"seed", seed}};
  r.estimate = mean_of(losses);
  r.band = "mean test loss <= 0.1 + 0.01; grid calibration == split threshold";
  r.pass = r.estimate <= alpha + 0.01 && all_equal;
  r.details = {{"mean_test_loss", r.estimate},
               {"split_equivalence_instances", inst},
               {"split_equivalence_ok", all_equal}};
  return r;
}

// --------------------------------------------------------------- suite 10
SuiteReport suite_outlier_fdr(std::size_t R, uint64_t seed, bool parallel) {
  const std::size_t n = 500, m = 100, outliers = 20;
  const double q = 0.1;
  std::vector<double> fdp(R), power(R);
  for_each_trial(R, parallel, [&](std::size_t i) {
    Rng rng(split_seed(seed, i));
    std::vector<double> cal(n);
    for (double& v : cal) v = rng.normal();
    std::vector<double> tests(m);
    for (std::size_t k = 0; k < m; ++k)
      tests[k] = rng.normal() + (k < outliers ? 3.0 : 0.0);
    auto p = outlier_pvalues(FiniteSample(cal), tests);
    RejectionSet rej = bh_procedure(p, q);
    std::size_t false_rej = 0, true_rej = 0;
    for (std::size_t idx : rej.indices)
      (idx < outliers ? true_rej : false_rej) += 1;
    std::size_t total = rej.indices.size();
    fdp[i] = total == 0 ? 0.0
                        : static_cast<double>(false_rej) /
                              static_cast<double>(total);
    power[i] = static_cast<double>(true_rej) / static_cast<double>(outliers);
  });
  SuiteReport r;
  r.suite = "outlier-fdr";
  r.params = {{"trials", R}, {"n", n}, {"m", m}, {"outliers", outliers},
              {"q", q}, {"seed", seed}};
  r.estimate = mean_of(fdp);
  r.band = "empirical FDR <= 0.1 + 0.01";
  r.pass = r.estimate <= q + 0.01;
  r.details = {{"fdr", r.estimate}, {"mean_power", mean_of(power)}};
  return r;
}

// --------------------------------------------------------------- suite 11
SuiteReport suite_online_independence(std::size_t R, uint64_t seed,
                                      bool parallel) {
  const std::size_t T = 200, P = 20, C = 5;
  // times are multiples of 5 so the C quantile cells are exactly equiprobable
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  {
    Rng pr(split_seed(seed, 0xFFFFFFFFull));
    while (pairs.size() < P) {
      std::size_t t1 = 25 + 5 * pr.below(36);  // {25,...,200}
      std::size_t t2 = 25 + 5 * pr.below(36);
      if (t1 == t2) continue;
      if (t1 > t2) std::swap(t1, t2);
      if (std::find(pairs.begin(), pairs.end(), std::make_pair(t1, t2)) ==
          pairs.end())
        pairs.emplace_back(t1, t2);
    }
  }
  auto cell = [&](double p) {
    int c = static_cast<int>(std::ceil(p * C)) - 1;
    return std::min(std::max(c, 0), static_cast<int>(C) - 1);
  };
  std::vector<std::array<unsigned char, 2 * P>> cells(R);
  for_each_trial(R, parallel, [&](std::size_t i) {
    Rng rng(split_seed(seed, i));
    StreamState st(ScoreFn::from_pretrained(
        [](const std::vector<double>&, double y) { return y; }));
    std::vector<double> p(T);
    for (std::size_t t = 0; t < T; ++t) p[t] = st.step({0.0}, rng.normal());
    for (std::size_t k = 0; k < P; ++k) {
      cells[i][2 * k] = static_cast<unsigned char>(cell(p[pairs[k].first - 1]));
      cells[i][2 * k + 1] =
          static_cast<unsigned char>(cell(p[pairs[k].second - 1]));
    }
  });
  double min_p = 1.0;
  bool ok = true;
  const double level = 0.001 / static_cast<double>(P);
  for (std::size_t k = 0; k < P; ++k) {
    double table[C][C] = {};
    double rowm[C] = {}, colm[C] = {};
    for (std::size_t i = 0; i < R; ++i) {
      int a = cells[i][2 * k], b = cells[i][2 * k + 1];
      table[a][b] += 1.0;
      rowm[a] += 1.0;
      colm[b] += 1.0;
    }
    double stat = 0.0;
    for (std::size_t a = 0; a < C; ++a)
      for (std::size_t b = 0; b < C; ++b) {
        double e = rowm[a] * colm[b] / static_cast<double>(R);
        if (e > 0.0) stat += (table[a][b] - e) * (table[a][b] - e) / e;
      }
    double pv = chi_square_sf(stat, static_cast<double>((C - 1) * (C - 1)));
    min_p = std::min(min_p, pv);
    if (pv <= level) ok = false;
  }
  SuiteReport r;
  r.suite = "online-independence";
  r.params = {{"trials", R}, {"T", T}, {"pairs", P}, {"seed", seed}};
  r.estimate = min_p;
  r.band = "all pairwise chi-square p-values > 0.001 / 20";
  r.pass = ok;
  r.details = {{"min_pvalue", min_p}, {"per_test_level", level}};
  return r;
}

// --------------------------------------------------------------- suite 12
// Brute-force monotone least-squares projection via the max-min formula.
std::vector<double> isotonic_oracle(const std::vector<double>& y) {
  const std::size_t n = y.size();
  std::vector<double> prefix(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) prefix[i + 1] = prefix[i] + y[i];
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    double best = -kInf;
    for (std::size_t j = 0; j <= i; ++j) {
      double worst = kInf;
      for (std::size_t k = i; k < n; ++k) {
        double m = (prefix[k + 1] - prefix[j]) / static_cast<double>(k + 1 - j);
        worst = std::min(worst, m);
      }
      best = std::max(best, worst);
    }
    out[i] = best;
  }
  return out;
}

bool pava_exhaustive_check(uint64_t seed) {
  // every binary sequence of length 12
  for (unsigned mask = 0; mask < (1u << 12); ++mask) {
    std::vector<double> y(12);
    for (int b = 0; b < 12; ++b) y[b] = (mask >> b) & 1u;
    std::vector<double> fit = pava(y), oracle = isotonic_oracle(y);
    for (std::size_t i = 0; i < y.size(); ++i)
      if (std::abs(fit[i] - oracle[i]) > 1e-9) return false;
  }
  Rng rng(seed);
  for (int rep = 0; rep < 200; ++rep) {
    std::size_t n = 1 + rng.below(12);
    std::vector<double> y(n);
    for (double& v : y) v = rng.normal();
    std::vector<double> fit = pava(y), oracle = isotonic_oracle(y);
    for (std::size_t i = 0; i < n; ++i)
      if (std::abs(fit[i] - oracle[i]) > 1e-9) return false;
  }
  return true;
}

SuiteReport suite_calibration(std::size_t R, uint64_t seed, bool parallel) {
  bool pava_ok = pava_exhaustive_check(split_seed(seed, 1));

  // (b) constant predictor 0.3 against Bernoulli(1/2): true dCE = 0.2
  const std::size_t Rb = 500, nb = 500;
  std::vector<char> covered(Rb, 0);
  for_each_trial(Rb, parallel, [&](std::size_t i) {
    Rng rng(split_seed(seed ^ 0xD15EA5E0D15EA5E0ull, i));
    std::vector<double> scores(nb, 0.3);
    std::vector<int> labels(nb);
    for (int& l : labels) l = rng.uniform() < 0.5 ? 1 : 0;
    covered[i] = dce_estimate(scores, labels, 10).upper_confidence >= 0.2;
  });
  double dce_cov = 0.0;
  for (char c : covered) dce_cov += c;
  dce_cov /= static_cast<double>(Rb);

  // (c) Venn-Abers on a well-specified Bernoulli model
  const std::size_t nc = 200;
  std::vector<double> va_p(R), va_y(R);
  for_each_trial(R, parallel, [&](std::size_t i) {
    Rng rng(split_seed(seed ^ 0xABCDEF0123456789ull, i));
    std::vector<double> scores(nc);
    std::vector<int> labels(nc);
    for (std::size_t k = 0; k < nc; ++k) {
      scores[k] = rng.uniform();
      labels[k] = rng.uniform() < scores[k] ? 1 : 0;
    }
    double zt = rng.uniform();
    int yt = rng.uniform() < zt ? 1 : 0;
    auto [p0, p1] = venn_abers(scores, labels, zt);
    va_p[i] = 0.5 * (p0 + p1);
    va_y[i] = yt;
  });
  bool va_ok = true;
  double va_worst = 0.0;
  for (int b = 0; b < 10; ++b) {
    double lo = b / 10.0, hi = (b + 1) / 10.0;
    double cnt = 0.0, sy = 0.0, sp = 0.0;
    for (std::size_t i = 0; i < R; ++i) {
      if (va_p[i] > lo && va_p[i] <= hi + (b == 9 ? 1e-12 : 0.0)) {
        cnt += 1.0;
        sy += va_y[i];
        sp += va_p[i];
      }
    }
    if (cnt < 50.0) continue;
    double dev = std::abs(sy / cnt - sp / cnt);
    double band = 3.0 * std::sqrt(0.25 / cnt);
    va_worst = std::max(va_worst, dev / band);
    if (dev > band) va_ok = false;
  }

  // (d) binECE of f_eps(x) = (1-eps)/2 + eps x with 2 bins equals eps/4
  bool bece_ok = true;
  json bece = json::array();
  const std::size_t nd = 20000;
  for (double eps : {0.1, 0.01}) {
    Rng rng(split_seed(seed ^ 0x1122334455667788ull,
                       static_cast<uint64_t>(eps * 1000)));
    std::vector<double> scores(nd);
    std::vector<int> labels(nd);
    for (std::size_t k = 0; k < nd; ++k) {
      double x = rng.uniform();
      labels[k] = (x > 0.25 && x < 0.75) ? 1 : 0;
      scores[k] = (1.0 - eps) / 2.0 + eps * x;
    }
    BinnedEce e = binned_ece_estimate(scores, labels, 2);
    bool ok = std::abs(e.estimate - eps / 4.0) <= e.radius;
    bece_ok = bece_ok && ok;
    bece.push_back({{"eps", eps}, {"estimate", e.estimate},
                    {"target", eps / 4.0}, {"radius", e.radius}});
  }

  SuiteReport r;
  r.suite = "calibration";
  r.params = {{"trials", R}, {"seed", seed}};
  r.estimate = va_worst;
  r.band = "PAVA exact; dCE bound covers >= 95%; Venn-Abers bins within 3sigma; "
           "binECE within radius";
  r.pass = pava_ok && dce_cov >= 0.95 && va_ok && bece_ok;
  r.details = {{"pava_exact", pava_ok}, {"dce_coverage", dce_cov},
               {"venn_abers_worst_sigma_ratio", va_worst},
               {"binned_ece", bece}};
  return r;
}

// --------------------------------------------------------------- suite 13
SuiteReport suite_local_perm(std::size_t R, uint64_t seed, bool parallel) {
  const double alpha = 0.1;
  const std::size_t M = 199;
  auto T = abs_correlation_statistic();

  // (i) discrete confounder, conditionally independent null
  const std::size_t n1 = 120;
  std::vector<char> rej1(R, 0);
  for_each_trial(R, parallel, [&](std::size_t i) {
    Rng rng(split_seed(seed, i));
    std::vector<double> xs(n1), ys(n1), ws(n1);
    for (std::size_t k = 0; k < n1; ++k) {
      ws[k] = static_cast<double>(rng.below(3));
      xs[k] = ws[k] + rng.normal();
      ys[k] = ws[k] + rng.normal();
    }
    PermutationBudget budget;
    budget.mode = PermutationBudget::Mode::kSampled;
    budget.samples = M;
    budget.seed = split_seed(seed ^ 0x1357135713571357ull, i);
    rej1[i] = local_permutation_test(xs, ys, ws, T, budget, alpha).reject;
  });
  double t1 = 0.0;
  for (char c : rej1) t1 += c;
  t1 /= static_cast<double>(R);

  // (ii) smooth confounder, binned test
  const std::size_t n2 = 100;
  const double h = std::pow(static_cast<double>(n2), -0.6);
  const int nbins = static_cast<int>(std::ceil(1.0 / h));
  double inflation = 0.0;
  std::vector<char> rej2(R, 0);
  for_each_trial(R, parallel, [&](std::size_t i) {
    Rng rng(split_seed(seed ^ 0x2468246824682468ull, i));
    std::vector<double> xs(n2), ys(n2), ws(n2);
    for (std::size_t k = 0; k < n2; ++k) {
      ws[k] = rng.uniform();
      xs[k] = ws[k] + 0.5 * rng.normal();
      ys[k] = ws[k] + 0.5 * rng.normal();
    }
    PermutationBudget budget;
    budget.mode = PermutationBudget::Mode::kSampled;
    budget.samples = M;
    budget.seed = split_seed(seed ^ 0x8642864286428642ull, i);
    auto bin = [nbins](double w) {
      int b = static_cast<int>(w * nbins);
      return std::min(std::max(b, 0), nbins - 1);
    };
    TestResult res = binned_local_permutation_test(
        xs, ys, ws, bin, T, budget, alpha, 1.0, 1.0 / nbins);
    rej2[i] = res.reject;
    if (i == 0) inflation = res.inflation;
  });
  double t2 = 0.0;
  for (char c : rej2) t2 += c;
  t2 /= static_cast<double>(R);

  // (iii) power on a strongly dependent alternative
  std::vector<char> rej3(R, 0);
  for_each_trial(R, parallel, [&](std::size_t i) {
    Rng rng(split_seed(seed ^ 0x0F0F0F0F0F0F0F0Full, i));
    std::vector<double> xs(n1), ys(n1), ws(n1);
    for (std::size_t k = 0; k < n1; ++k) {
      ws[k] = static_cast<double>(rng.below(3));
      xs[k] = ws[k] + rng.normal();
      ys[k] = xs[k] + 0.5 * rng.normal();
    }
    PermutationBudget budget;
    budget.mode = PermutationBudget::Mode::kSampled;
    budget.samples = M;
    budget.seed = split_seed(seed ^ 0xF0F0F0F0F0F0F0F0ull, i);
    rej3[i] = local_permutation_test(xs, ys, ws, T, budget, alpha).reject;
  });
  double power = 0.0;
  for (char c : rej3) power += c;
  power /= static_cast<double>(R);

  double tol = binom3sigma(alpha, R);
  SuiteReport r;
  r.suite = "local-perm";
  r.params = {{"trials", R}, {"alpha", alpha}, {"perm_samples", M},
              {"seed", seed}};
  r.estimate = t1;
  r.band = "Type I <= alpha + 3sigma (discrete), <= alpha + Lh sqrt(2n) + "
           "3sigma (binned); power > 0.5";
  r.pass = t1 <= alpha + tol &&
           t2 <= std::min(1.0, alpha + inflation + tol) && power > 0.5;
  r.details = {{"discrete_type1", t1}, {"binned_type1", t2},
               {"binned_inflation", inflation}, {"power", power},
               {"tolerance_3sigma", tol}};
  return r;
}

// --------------------------------------------------------------- suite 14
SuiteReport suite_regression_ci(std::size_t R, uint64_t seed, bool parallel) {
  const std::size_t n = 2000, K = 10;
  const double alpha = 0.1;
  std::vector<double> noncov(R), length(R);
  for_each_trial(R, parallel, [&](std::size_t i) {
    Rng rng(split_seed(seed, i));
    Dataset train;
    for (std::size_t k = 0; k < n; ++k) {
      double xk = static_cast<double>(rng.below(K));
      double mu = (xk + 0.5) / static_cast<double>(K);
      train.add({xk}, rng.uniform() < mu ? 1.0 : 0.0);
    }
    double xq = static_cast<double>(rng.below(K));
    double mu = (xq + 0.5) / static_cast<double>(K);
    RegressionCiParams params;
    params.a = 0.0;
    params.b = 1.0;
    RegressionCi ci = regression_ci(train, {xq}, alpha,
                                    RegressionCiMethod::kDiscrete, params);
    noncov[i] = (mu < ci.lo || mu > ci.hi) ? 1.0 : 0.0;
    length[i] = ci.hi - ci.lo;
  });
  double nc = mean_of(noncov), len = mean_of(length);
  double len_bound = 2.0 * std::sqrt(std::log(2.0 / alpha)) *
                     std::sqrt(static_cast<double>(K) / static_cast<double>(n));
  SuiteReport r;
  r.suite = "regression-ci";
  r.params = {{"trials", R}, {"n", n}, {"K", K}, {"alpha", alpha},
              {"seed", seed}};
  r.estimate = nc;
  r.band = "non-coverage <= 0.1 + 0.01; mean length <= 2(b-a)sqrt(log 20) "
           "sqrt(K/n)";
  r.pass = nc <= alpha + 0.01 && len <= len_bound;
  r.details = {{"noncoverage", nc}, {"mean_length", len},
               {"length_bound", len_bound}};
  return r;
}

using SuiteFn = SuiteReport (*)(std::size_t, uint64_t, bool);

const std::vector<std::pair<std::string, SuiteFn>>& registry() {
  static const std::vector<std::pair<std::string, SuiteFn>> reg = {
      {"split-coverage", suite_split_coverage},
      {"beta-law", suite_beta_law},
      {"smoothed-uniform", suite_smoothed_uniform},
      {"ls-full-cp", suite_ls_full_cp},
      {"crossval", suite_crossval},
      {"covariate-shift", suite_covariate_shift},
      {"tracker-envelope", suite_tracker},
      {"martingale", suite_martingale},
      {"risk-control", suite_risk_control},
      {"outlier-fdr", suite_outlier_fdr},
      {"online-independence", suite_online_independence},
      {"calibration", suite_calibration},
      {"local-perm", suite_local_perm},
      {"regression-ci", suite_regression_ci},
  };
  return reg;
}

}  // namespace

json SuiteReport::to_json() const {
  return json{{"suite", suite}, {"params", params}, {"estimate", estimate},
              {"band", band},   {"pass", pass},     {"details", details}};
}

std::vector<std::string> suite_names() {
  std::vector<std::string> out;
  for (const auto& [name, fn] : registry()) out.push_back(name);
  return out;
}

SuiteReport run_suite(const std::string& id, std::size_t trials, uint64_t seed,
                      bool parallel) {
  for (const auto& [name, fn] : registry()) {
    if (name == id) {
      if (trials == 0) return empty_report(id);
      return fn(trials, seed, parallel);
    }
  }
  throw std::invalid_argument("run_suite: unknown suite '" + id + "'");
}

}  // namespace dfp
