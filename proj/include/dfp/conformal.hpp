#ifndef DFP_CONFORMAL_HPP_
#define DFP_CONFORMAL_HPP_

#include <vector>

#include "dfp/dataset.hpp"
#include "dfp/quantile.hpp"
#include "dfp/score.hpp"
#include "dfp/set.hpp"

namespace dfp {

// Candidate response space: a finite label set, or a real grid. For real
// responses the caller supplies the grid bounds; accepted contiguous grid
// runs are reported as closed intervals.
struct YDomain {
  enum class Kind { kLabels, kGrid };
  Kind kind = Kind::kGrid;
  std::vector<int> labels;
  std::vector<double> grid;

  static YDomain from_labels(int num_labels);
  static YDomain from_grid(double lo, double hi, std::size_t points);
};

// Build a set from a membership predicate evaluated over the domain;
// contiguous accepted grid runs become closed intervals.
PredictionSet set_from_domain(const YDomain& dom,
                              const std::function<bool(double)>& accept);

// Quantile(cal_scores; (1-alpha)(1+1/n)); +inf when the level exceeds 1.
double split_threshold(const FiniteSample& cal_scores, double alpha);

// Sublevel set {y in dom : s(x,y) <= split_threshold(scores(cal))} for a
// pretrained score.
PredictionSet split_set(const PointScore& s, const Dataset& cal,
                        const std::vector<double>& x, double alpha,
                        const YDomain& dom);

// (1 + #{i <= n : S_i >= S_{n+1}}) / (n+1); the last entry is the test score.
double conformal_pvalue(const std::vector<double>& scores_with_test);

// (#{S_i > S} + xi * #{S_i = S}) / (n+1) with S the last entry; exactly
// uniform under exchangeability when xi ~ Unif[0,1].
double smoothed_pvalue(const std::vector<double>& scores_with_test, double xi);

// Full conformal over a finite label set with a symmetric refit score.
PredictionSet full_set_finite(const ScoreFn& s, const Dataset& train,
                              const std::vector<double>& x, double alpha,
                              int num_labels);

// Exact full conformal for least squares via the linear parametrization of
// augmented residuals in the hypothesized response; O(n) crossing equations.
PredictionSet full_set_least_squares(const Dataset& train,
                                     const std::vector<double>& x,
                                     double alpha);

// Symmetry-preserving discretized full conformal: responses rounded to the
// nearest grid value before refitting; accepted grid cells are returned as
// intervals of the rounding partition.
PredictionSet full_set_discretized(const ScoreFn& s, const Dataset& train,
                                   const std::vector<double>& x, double alpha,
                                   const std::vector<double>& grid);

struct PacLevel {
  double alpha_prime;
  bool boundary = false;  // no solution in (0, alpha]; boundary returned
};

// The corrected level for training-conditional (PAC) coverage: the alpha'
// solving F_Beta((1-a')(n+1), a'(n+1))(1-alpha) = delta, by bisection.
PacLevel pac_level(std::size_t n, double alpha, double delta);

}  // namespace dfp

#endif  // DFP_CONFORMAL_HPP_
