#ifndef DFP_SET_HPP_
#define DFP_SET_HPP_

#include <utility>
#include <vector>

namespace dfp {

// A prediction set: a finite union of closed intervals over R (endpoints may
// be +-inf), a finite label subset, everything, or nothing.
class PredictionSet {
 public:
  enum class Kind { kEmpty, kAll, kIntervals, kLabels };

  static PredictionSet empty();
  static PredictionSet all();
  // Intervals are normalized: invalid (lo > hi) parts dropped, remainder
  // sorted and merged when overlapping or touching.
  static PredictionSet intervals(std::vector<std::pair<double, double>> parts);
  static PredictionSet labels(std::vector<int> items);

  Kind kind() const { return kind_; }
  bool contains(double y) const;
  bool contains_label(int label) const;
  // Lebesgue length for intervals, cardinality for labels, +inf for all.
  double measure() const;

  const std::vector<std::pair<double, double>>& parts() const { return parts_; }
  const std::vector<int>& label_items() const { return labels_; }

  bool operator==(const PredictionSet& o) const;

 private:
  Kind kind_ = Kind::kEmpty;
  std::vector<std::pair<double, double>> parts_;
  std::vector<int> labels_;
};

// Union of two sets over the same domain; mixing labels with intervals is an
// error.
PredictionSet set_union(const PredictionSet& a, const PredictionSet& b);

}  // namespace dfp

#endif  // DFP_SET_HPP_
