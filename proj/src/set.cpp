#include "dfp/set.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace dfp {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

PredictionSet PredictionSet::empty() { return PredictionSet{}; }

PredictionSet PredictionSet::all() {
  PredictionSet s;
  s.kind_ = Kind::kAll;
  return s;
}

PredictionSet PredictionSet::intervals(
    std::vector<std::pair<double, double>> parts) {
  std::vector<std::pair<double, double>> keep;
  for (auto& p : parts) {
    if (std::isnan(p.first) || std::isnan(p.second))
      throw std::invalid_argument("PredictionSet: NaN endpoint");
    if (p.first <= p.second) keep.push_back(p);  // [a,b] with a > b is empty
  }
  if (keep.empty()) return empty();
  std::sort(keep.begin(), keep.end());
  std::vector<std::pair<double, double>> merged;
  for (auto& p : keep) {
    if (!merged.empty() && p.first <= merged.back().second) {
      merged.back().second = std::max(merged.back().second, p.second);
    } else {
      merged.push_back(p);
    }
  }
  if (merged.size() == 1 && merged[0].first == -kInf &&
      merged[0].second == kInf)
    return all();
  PredictionSet s;
  s.kind_ = Kind::kIntervals;
  s.parts_ = std::move(merged);
  return s;
}

PredictionSet PredictionSet::labels(std::vector<int> items) {
  if (items.empty()) return empty();
  std::sort(items.begin(), items.end());
  items.erase(std::unique(items.begin(), items.end()), items.end());
  PredictionSet s;
  s.kind_ = Kind::kLabels;
  s.labels_ = std::move(items);
  return s;
}

bool PredictionSet::contains(double y) const {
  switch (kind_) {
    case Kind::kEmpty:
      return false;
    case Kind::kAll:
      return true;
    case Kind::kIntervals: {
      auto it = std::upper_bound(
          parts_.begin(), parts_.end(), y,
          [](double v, const std::pair<double, double>& p) { return v < p.first; });
      if (it == parts_.begin()) return false;
      --it;
      return y <= it->second;
    }
    case Kind::kLabels:
      return contains_label(static_cast<int>(y));
  }
  return false;
}

bool PredictionSet::contains_label(int label) const {
  if (kind_ == Kind::kAll) return true;
  if (kind_ != Kind::kLabels) return false;
  return std::binary_search(labels_.begin(), labels_.end(), label);
}

double PredictionSet::measure() const {
  switch (kind_) {
    case Kind::kEmpty:
      return 0.0;
    case Kind::kAll:
      return kInf;
    case Kind::kIntervals: {
      double s = 0.0;
      for (auto& p : parts_) s += p.second - p.first;
      return s;
    }
    case Kind::kLabels:
      return static_cast<double>(labels_.size());
  }
  return 0.0;
}

bool PredictionSet::operator==(const PredictionSet& o) const {
  return kind_ == o.kind_ && parts_ == o.parts_ && labels_ == o.labels_;
}

PredictionSet set_union(const PredictionSet& a, const PredictionSet& b) {
  using Kind = PredictionSet::Kind;
  if (a.kind() == Kind::kEmpty) return b;
  if (b.kind() == Kind::kEmpty) return a;
  if (a.kind() == Kind::kAll || b.kind() == Kind::kAll)
    return PredictionSet::all();
  if (a.kind() != b.kind())
    throw std::invalid_argument("set_union: mixed domains");
  if (a.kind() == Kind::kLabels) {
    std::vector<int> items = a.label_items();
    items.insert(items.end(), b.label_items().begin(), b.label_items().end());
    return PredictionSet::labels(std::move(items));
  }
  std::vector<std::pair<double, double>> parts = a.parts();
  parts.insert(parts.end(), b.parts().begin(), b.parts().end());
  return PredictionSet::intervals(std::move(parts));
}

}  // namespace dfp
