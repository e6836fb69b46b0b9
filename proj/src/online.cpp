#include "dfp/online.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace dfp {

StreamState::StreamState(ScoreFn s) : s_(std::move(s)) {}

std::vector<double> StreamState::all_scores(const std::vector<double>& x,
                                            double y) {
  // refit mode: the score is retrained on the whole current history
  PointScore sc = s_.trained_on(history_);
  std::vector<double> out(history_.n());
  for (std::size_t i = 0; i < history_.n(); ++i)
    out[i] = sc(history_.x[i], history_.y[i]);
  (void)x;
  (void)y;
  return out;
}

double StreamState::step(const std::vector<double>& x, double y) {
  history_.add(x, y);
  double p;
  if (s_.is_pretrained()) {
    double st = s_.pretrained(x, y);
    auto it = std::lower_bound(sorted_scores_.begin(), sorted_scores_.end(), st);
    sorted_scores_.insert(it, st);
    // #{S_i >= S_t} = t - #{S_i < S_t}
    std::size_t below = static_cast<std::size_t>(
        std::lower_bound(sorted_scores_.begin(), sorted_scores_.end(), st) -
        sorted_scores_.begin());
    p = static_cast<double>(sorted_scores_.size() - below) /
        static_cast<double>(sorted_scores_.size());
  } else {
    std::vector<double> s = all_scores(x, y);
    double st = s.back();
    std::size_t count = 0;
    for (double v : s)
      if (v >= st) ++count;
    p = static_cast<double>(count) / static_cast<double>(s.size());
  }
  pvalues_.push_back(p);
  return p;
}

double StreamState::step_smoothed(const std::vector<double>& x, double y,
                                  double xi) {
  if (!(xi >= 0.0 && xi <= 1.0))
    throw std::invalid_argument("step_smoothed: xi outside [0,1]");
  history_.add(x, y);
  std::vector<double> s;
  if (s_.is_pretrained()) {
    double st = s_.pretrained(x, y);
    auto it = std::lower_bound(sorted_scores_.begin(), sorted_scores_.end(), st);
    sorted_scores_.insert(it, st);
    s = sorted_scores_;
  } else {
    s = all_scores(x, y);
  }
  double st = s_.is_pretrained() ? s_.pretrained(x, y) : s.back();
  std::size_t above = 0, ties = 0;
  for (double v : s) {
    if (v > st) ++above;
    if (v == st) ++ties;  // includes the point itself
  }
  double p = (static_cast<double>(above) + xi * static_cast<double>(ties)) /
             static_cast<double>(s.size());
  pvalues_.push_back(p);
  return p;
}

std::function<double(double)> simple_betting(double lambda) {
  if (!(lambda >= 0.0 && lambda <= 1.0))
    throw std::invalid_argument("simple_betting: lambda in [0,1] required");
  return [lambda](double r) { return (1.0 - lambda * r) / (1.0 - lambda / 2.0); };
}

Martingale::Martingale(std::function<double(double)> betting, double alpha)
    : f_(std::move(betting)), alpha_(alpha) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::invalid_argument("Martingale: alpha in (0,1) required");
  // registration checks: nonnegative, nonincreasing, integral <= 1
  const int grid = 4096;
  double prev = std::numeric_limits<double>::infinity();
  double integral = 0.0;
  for (int i = 0; i <= grid; ++i) {
    double r = static_cast<double>(i) / grid;
    double v = f_(r);
    if (!(v >= 0.0))
      throw std::invalid_argument("Martingale: betting function must be >= 0");
    if (v > prev + 1e-12)
      throw std::invalid_argument("Martingale: betting function must be nonincreasing");
    prev = v;
    integral += (i == 0 || i == grid) ? 0.5 * v : v;
  }
  integral /= grid;
  if (integral > 1.0 + 1e-6)
    throw std::invalid_argument("Martingale: betting function integral exceeds 1");
}

void Martingale::update(double p) {
  if (!(p >= 0.0 && p <= 1.0))
    throw std::invalid_argument("Martingale: p outside [0,1]");
  double v = f_(p);
  log_wealth_ = (v <= 0.0) ? -std::numeric_limits<double>::infinity()
                           : log_wealth_ + std::log(v);
  max_log_wealth_ = std::max(max_log_wealth_, log_wealth_);
  ++steps_;
}

bool Martingale::alarm() const {
  return max_log_wealth_ >= std::log(1.0 / alpha_);
}

EtaSchedule constant_eta(double eta) {
  if (!(eta > 0.0)) throw std::invalid_argument("constant_eta: eta > 0");
  return [eta](std::size_t) { return eta; };
}

EtaSchedule polynomial_eta(double c, double p) {
  if (!(c > 0.0) || !(p >= 0.0))
    throw std::invalid_argument("polynomial_eta: c > 0, p >= 0 required");
  return [c, p](std::size_t t) {
    return c * std::pow(static_cast<double>(t), -p);
  };
}

QuantileTracker::QuantileTracker(double alpha, double B, EtaSchedule eta,
                                 double q1)
    : alpha_(alpha), B_(B), q_(q1), eta_(std::move(eta)) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::invalid_argument("QuantileTracker: alpha in (0,1) required");
  if (!(B > 0.0)) throw std::invalid_argument("QuantileTracker: B > 0 required");
}

int QuantileTracker::step(double score) {
  if (!(score >= 0.0 && score <= B_))
    throw std::invalid_argument("QuantileTracker: score outside [0,B]");
  ++t_;
  int err = score > q_ ? 1 : 0;
  err_sum_ += err;
  q_ += eta_(t_) * (static_cast<double>(err) - alpha_);
  return err;
}

double QuantileTracker::err_mean() const {
  return t_ == 0 ? 0.0 : err_sum_ / static_cast<double>(t_);
}

double tracker_longrun_bound(double B, const EtaSchedule& eta, std::size_t T) {
  if (T == 0) throw std::invalid_argument("tracker_longrun_bound: T >= 1");
  return (B + eta(1)) / (eta(T) * static_cast<double>(T));
}

}  // namespace dfp
