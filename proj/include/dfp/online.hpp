#ifndef DFP_ONLINE_HPP_
#define DFP_ONLINE_HPP_

#include <cstddef>
#include <functional>
#include <vector>

#include "dfp/dataset.hpp"
#include "dfp/score.hpp"

namespace dfp {

// Sequential full-conformal p-values p_t = #{i <= t : S_i >= S_t} / t.
// With a pretrained score the update keeps a sorted score list (O(t) insert);
// refit mode honestly recomputes all t scores per step.
class StreamState {
 public:
  explicit StreamState(ScoreFn s);

  // Appends the point and returns the deterministic p-value p_t.
  double step(const std::vector<double>& x, double y);
  // Smoothed variant with caller-supplied tie-break xi in [0,1]; mutually
  // independent uniforms even with ties.
  double step_smoothed(const std::vector<double>& x, double y, double xi);

  std::size_t t() const { return history_.n(); }
  const std::vector<double>& pvalues() const { return pvalues_; }

 private:
  std::vector<double> all_scores(const std::vector<double>& x, double y);
  ScoreFn s_;
  Dataset history_;
  std::vector<double> sorted_scores_;  // pretrained fast path
  std::vector<double> pvalues_;
};

// f(r) = (1 - lambda r) / (1 - lambda/2): the simple one-parameter betting
// function; valid for lambda in [0,1].
std::function<double(double)> simple_betting(double lambda);

// Exchangeability supermartingale M_t = prod f(p_t), wealth in log domain;
// alarm when sup_t M_t >= 1/alpha (Ville: false-alarm prob <= alpha).
// The betting function must be nonnegative, nonincreasing, with integral
// over [0,1] at most 1; validated at construction by quadrature (tol 1e-6).
class Martingale {
 public:
  Martingale(std::function<double(double)> betting, double alpha);

  void update(double p);
  double log_wealth() const { return log_wealth_; }
  double max_log_wealth() const { return max_log_wealth_; }
  bool alarm() const;
  std::size_t steps() const { return steps_; }

 private:
  std::function<double(double)> f_;
  double alpha_;
  double log_wealth_ = 0.0;
  double max_log_wealth_ = 0.0;
  std::size_t steps_ = 0;
};

// Step-size schedule, 1-based in t.
using EtaSchedule = std::function<double(std::size_t)>;
EtaSchedule constant_eta(double eta);
// eta_t = c * t^{-p}
EtaSchedule polynomial_eta(double c, double p);

// Online quantile tracking q_{t+1} = q_t + eta_t (err_t - alpha) with the
// deterministic long-run envelope |mean err - alpha| <= (B+eta_1)/(eta_T T).
class QuantileTracker {
 public:
  QuantileTracker(double alpha, double B, EtaSchedule eta, double q1 = 0.0);

  // err_t = 1{score_t > q_t}; returns the error bit.
  int step(double score);

  double q() const { return q_; }
  std::size_t t() const { return t_; }
  double err_mean() const;

 private:
  double alpha_, B_, q_;
  EtaSchedule eta_;
  std::size_t t_ = 0;  // completed steps
  double err_sum_ = 0.0;
};

// (B + eta_1) / (eta_T * T)
double tracker_longrun_bound(double B, const EtaSchedule& eta, std::size_t T);

}  // namespace dfp

#endif  // DFP_ONLINE_HPP_
