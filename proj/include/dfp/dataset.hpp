#ifndef DFP_DATASET_HPP_
#define DFP_DATASET_HPP_

#include <cstddef>
#include <vector>

namespace dfp {

// Rows of (x, y) with an optional per-row group id. y doubles as a label
// index (stored exactly) for classification scores.
struct Dataset {
  std::vector<std::vector<double>> x;
  std::vector<double> y;
  std::vector<int> group;  // empty, or one id per row

  std::size_t n() const { return y.size(); }
  std::size_t dim() const { return x.empty() ? 0 : x[0].size(); }

  void add(const std::vector<double>& xi, double yi, int g = -1);
  // Copy with one extra row appended (the full-conformal augmentation).
  Dataset with_point(const std::vector<double>& x_new, double y_new) const;
  Dataset subset(const std::vector<std::size_t>& idx) const;
  // Throws on inconsistent dimensions or non-finite entries.
  void validate() const;
};

}  // namespace dfp

#endif  // DFP_DATASET_HPP_
