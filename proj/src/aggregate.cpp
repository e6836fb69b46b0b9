#include "dfp/aggregate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace dfp {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

PredictionSet majority_vote_labels(const std::vector<PredictionSet>& sets) {
  std::vector<int> universe;
  for (const auto& s : sets)
    universe.insert(universe.end(), s.label_items().begin(),
                    s.label_items().end());
  std::sort(universe.begin(), universe.end());
  universe.erase(std::unique(universe.begin(), universe.end()),
                 universe.end());
  std::vector<int> keep;
  double half = static_cast<double>(sets.size()) / 2.0;
  for (int l : universe) {
    std::size_t count = 0;
    for (const auto& s : sets)
      if (s.contains_label(l)) ++count;
    if (static_cast<double>(count) > half) keep.push_back(l);
  }
  return PredictionSet::labels(std::move(keep));
}

}  // namespace

PredictionSet majority_vote(const std::vector<PredictionSet>& sets) {
  if (sets.empty()) throw std::invalid_argument("majority_vote: no inputs");
  using Kind = PredictionSet::Kind;
  bool any_labels = false, any_intervals = false;
  for (const auto& s : sets) {
    if (s.kind() == Kind::kLabels) any_labels = true;
    if (s.kind() == Kind::kIntervals) any_intervals = true;
  }
  if (any_labels && any_intervals)
    throw std::invalid_argument("majority_vote: mixed domains");
  if (any_labels) return majority_vote_labels(sets);

  // interval domain; all/empty participate everywhere/nowhere
  std::vector<double> cuts;
  for (const auto& s : sets)
    for (const auto& p : s.parts()) {
      if (std::isfinite(p.first)) cuts.push_back(p.first);
      if (std::isfinite(p.second)) cuts.push_back(p.second);
    }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  double half = static_cast<double>(sets.size()) / 2.0;
  auto member = [&](double y) {
    std::size_t count = 0;
    for (const auto& s : sets)
      if (s.contains(y)) ++count;
    return static_cast<double>(count) > half;
  };
  if (cuts.empty())
    return member(0.0) ? PredictionSet::all() : PredictionSet::empty();
  std::vector<std::pair<double, double>> parts;
  if (member(cuts.front() - 1.0)) parts.emplace_back(-kInf, cuts.front());
  for (std::size_t k = 0; k < cuts.size(); ++k) {
    if (member(cuts[k])) parts.emplace_back(cuts[k], cuts[k]);
    if (k + 1 < cuts.size() && member(0.5 * (cuts[k] + cuts[k + 1])))
      parts.emplace_back(cuts[k], cuts[k + 1]);
  }
  if (member(cuts.back() + 1.0)) parts.emplace_back(cuts.back(), kInf);
  return PredictionSet::intervals(std::move(parts));
}

double vote_entry_level(const SetFamily& family, const std::vector<double>& x,
                        double y) {
  const int G = SetFamily::kGridSteps;
  const std::size_t K = family.members.size();
  // per member, the first grid index where y enters (envelope = running OR)
  std::vector<int> entry(K, G + 1);
  for (std::size_t k = 0; k < K; ++k) {
    for (int j = 0; j <= G; ++j) {
      double lam = static_cast<double>(j) / G;
      if (family.members[k](x, lam).contains(y)) {
        entry[k] = j;
        break;
      }
    }
  }
  // strict majority: the (floor(K/2)+1)-th smallest entry index
  std::nth_element(entry.begin(), entry.begin() + K / 2, entry.end());
  int j = entry[K / 2];
  if (j > G) return 1.0 + 1.0 / G;  // never enters
  return static_cast<double>(j) / G;
}

RecalibratedVote recalibrated_vote(const SetFamily& family, const Dataset& cal,
                                   double alpha) {
  if (family.members.empty())
    throw std::invalid_argument("recalibrated_vote: empty family");
  const std::size_t n = cal.n();
  if (n == 0) throw std::invalid_argument("recalibrated_vote: empty calibration");
  double target = alpha - (1.0 - alpha) / static_cast<double>(n);
  if (target < 0.0) return {1.0, true};
  std::vector<double> entry(n);
  for (std::size_t i = 0; i < n; ++i)
    entry[i] = vote_entry_level(family, cal.x[i], cal.y[i]);
  const int G = SetFamily::kGridSteps;
  for (int j = 0; j <= G; ++j) {
    double lam = static_cast<double>(j) / G;
    std::size_t miss = 0;
    for (double e : entry)
      if (e > lam) ++miss;
    if (static_cast<double>(miss) / static_cast<double>(n) <= target + 1e-12)
      return {lam, false};
  }
  return {1.0, true};
}

PredictionSet recalibrated_set(const SetFamily& family, double lambda,
                               const std::vector<double>& x) {
  const int G = SetFamily::kGridSteps;
  std::vector<PredictionSet> envelopes;
  envelopes.reserve(family.members.size());
  for (const auto& m : family.members) {
    PredictionSet env = PredictionSet::empty();
    for (int j = 0; j <= G; ++j) {
      double lam = static_cast<double>(j) / G;
      if (lam > lambda + 1e-15) break;
      env = set_union(env, m(x, lam));
    }
    envelopes.push_back(std::move(env));
  }
  return majority_vote(envelopes);
}

}  // namespace dfp
