#include "dfp/dataset.hpp"

#include <cmath>
#include <stdexcept>

namespace dfp {

void Dataset::add(const std::vector<double>& xi, double yi, int g) {
  x.push_back(xi);
  y.push_back(yi);
  if (g >= 0 || !group.empty()) {
    if (group.size() + 1 != y.size())
      throw std::invalid_argument("Dataset: group column must be all-or-none");
    group.push_back(g);
  }
}

Dataset Dataset::with_point(const std::vector<double>& x_new,
                            double y_new) const {
  Dataset d = *this;
  d.x.push_back(x_new);
  d.y.push_back(y_new);
  if (!d.group.empty()) d.group.push_back(-1);
  return d;
}

Dataset Dataset::subset(const std::vector<std::size_t>& idx) const {
  Dataset d;
  for (std::size_t i : idx) {
    d.x.push_back(x[i]);
    d.y.push_back(y[i]);
    if (!group.empty()) d.group.push_back(group[i]);
  }
  return d;
}

void Dataset::validate() const {
  if (x.size() != y.size())
    throw std::invalid_argument("Dataset: x/y length mismatch");
  if (!group.empty() && group.size() != y.size())
    throw std::invalid_argument("Dataset: group length mismatch");
  std::size_t d = dim();
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i].size() != d)
      throw std::invalid_argument("Dataset: inconsistent feature dimension");
    for (double v : x[i])
      if (!std::isfinite(v))
        throw std::invalid_argument("Dataset: non-finite feature");
    if (!std::isfinite(y[i]))
      throw std::invalid_argument("Dataset: non-finite response");
  }
}

}  // namespace dfp
