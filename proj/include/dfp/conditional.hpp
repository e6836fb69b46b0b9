#ifndef DFP_CONDITIONAL_HPP_
#define DFP_CONDITIONAL_HPP_

#include <functional>
#include <vector>

#include "dfp/conformal.hpp"
#include "dfp/dataset.hpp"
#include "dfp/score.hpp"
#include "dfp/set.hpp"

namespace dfp {

// Partition function over data points; group-conditional calibration runs
// one quantile per group. Arity is declared so callers can take fast paths
// for rules that ignore the label.
struct GroupFn {
  enum class Arity { kFeatures, kLabel, kJoint };
  Arity arity = Arity::kJoint;
  std::function<int(const std::vector<double>&, double)> g;
};

// Group-conditional (Mondrian) conformal: per-group quantile at level
// (1-alpha)(1+1/|I_g|); a hypothesized y whose group has no calibration
// points is always included (empty-list quantile is +inf).
PredictionSet mondrian_set(const ScoreFn& s, const Dataset& train,
                           const std::vector<double>& x, double alpha,
                           const GroupFn& g, const YDomain& dom);

// Per-bin split thresholds over a fixed feature partition; empty bin -> +inf.
std::vector<double> binwise_split_thresholds(
    const Dataset& cal, const PointScore& s,
    const std::function<int(const std::vector<double>&)>& bin_of, int num_bins,
    double alpha);

// Symmetric selection rule: maps an augmented dataset of size n+1 to the
// selected subset of its row indices.
using SelectionRule =
    std::function<std::vector<std::size_t>(const Dataset&)>;

// Selection-conditional conformal: y is included when the hypothesized test
// point is itself selected and its score is within the quantile of the
// selected calibration scores at level (1-alpha)(1+1/|selected|).
PredictionSet selective_set(const ScoreFn& s, const Dataset& train,
                            const std::vector<double>& x, double alpha,
                            const SelectionRule& rule, const YDomain& dom);

}  // namespace dfp

#endif  // DFP_CONDITIONAL_HPP_
