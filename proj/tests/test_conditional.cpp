#include <doctest.h>

#include <cmath>
#include <vector>

#include "dfp/conditional.hpp"
#include "dfp/rng.hpp"

using dfp::Dataset;
using dfp::FiniteSample;
using dfp::GroupFn;
using dfp::PredictionSet;
using dfp::Rng;
using dfp::ScoreFn;
using dfp::YDomain;

namespace {
dfp::PointScore abs_score() {
  return [](const std::vector<double>&, double y) { return std::abs(y); };
}
}  // namespace

TEST_SUITE("conditional") {
  TEST_CASE("constant group function reduces to unconditional conformal") {
    ScoreFn s = ScoreFn::from_pretrained(abs_score());
    Rng rng(7);
    Dataset d;
    for (int i = 0; i < 15; ++i) d.add({rng.uniform()}, rng.normal());
    GroupFn g{GroupFn::Arity::kFeatures,
              [](const std::vector<double>&, double) { return 0; }};
    YDomain dom = YDomain::from_grid(-4.0, 4.0, 801);
    PredictionSet mond = dfp::mondrian_set(s, d, {0.5}, 0.2, g, dom);
    // unconditional oracle: split threshold of all scores
    std::vector<double> scores;
    for (double y : d.y) scores.push_back(std::abs(y));
    double q = dfp::split_threshold(FiniteSample(scores), 0.2);
    PredictionSet plain =
        dfp::set_from_domain(dom, [&](double y) { return std::abs(y) <= q; });
    CHECK(mond == plain);
  }

  TEST_CASE("label-conditional groups use per-group thresholds") {
    ScoreFn s = ScoreFn::from_pretrained(abs_score());
    Dataset d;
    // group 0: y in {-3,...}, group 1: small |y|
    std::vector<double> ys = {-3.0, -2.5, -2.2, -2.8, 0.1, 0.2, 0.15, 0.05};
    for (double y : ys) d.add({0.0}, y);
    GroupFn g{GroupFn::Arity::kLabel,
              [](const std::vector<double>&, double y) {
                return std::abs(y) > 1.0 ? 0 : 1;
              }};
    YDomain dom = YDomain::from_grid(-5.0, 5.0, 2001);
    double alpha = 0.3;
    PredictionSet set = dfp::mondrian_set(s, d, {0.0}, alpha, g, dom);
    // oracle per hypothesized y
    std::vector<double> g0, g1;
    for (double y : ys) (std::abs(y) > 1.0 ? g0 : g1).push_back(std::abs(y));
    double q0 = dfp::split_threshold(FiniteSample(g0), alpha);
    double q1 = dfp::split_threshold(FiniteSample(g1), alpha);
    for (double y : {-2.9, -2.0, -1.5, -0.5, 0.0, 0.12, 0.5, 2.6, 3.5}) {
      bool expect =
          std::abs(y) > 1.0 ? (std::abs(y) <= q0) : (std::abs(y) <= q1);
      CHECK(set.contains(y) == expect);
    }
  }

  TEST_CASE("empty calibration group is always included") {
    ScoreFn s = ScoreFn::from_pretrained(abs_score());
    Dataset d;
    for (double y : {0.1, 0.2, 0.3}) d.add({0.0}, y);
    // hypothesized negative responses land in a group with no calibration data
    GroupFn g{GroupFn::Arity::kLabel, [](const std::vector<double>&, double y) {
                return y < 0.0 ? 7 : 0;
              }};
    YDomain dom = YDomain::from_grid(-2.0, 2.0, 401);
    PredictionSet set = dfp::mondrian_set(s, d, {0.0}, 0.25, g, dom);
    CHECK(set.contains(-1.9));
    CHECK(set.contains(-0.01));
  }

  TEST_CASE("binwise thresholds: one bin equals the split threshold") {
    Rng rng(13);
    Dataset d;
    std::vector<double> scores;
    dfp::PointScore s = abs_score();
    for (int i = 0; i < 12; ++i) {
      double y = rng.normal();
      d.add({rng.uniform()}, y);
      scores.push_back(std::abs(y));
    }
    auto thr = dfp::binwise_split_thresholds(
        d, s, [](const std::vector<double>&) { return 0; }, 1, 0.2);
    REQUIRE(thr.size() == 1);
    CHECK(thr[0] == dfp::split_threshold(FiniteSample(scores), 0.2));
  }

  TEST_CASE("binwise thresholds: per-bin quantiles and empty-bin +inf") {
    Dataset d;
    dfp::PointScore s = abs_score();
    // bin 0: x < 0.5, bin 1: x >= 0.5, bin 2 empty
    std::vector<std::pair<double, double>> rows = {
        {0.1, 0.4}, {0.2, 0.8}, {0.3, 0.2}, {0.4, 0.6},
        {0.6, 3.0}, {0.7, 1.0}, {0.8, 2.0}, {0.9, 4.0}};
    std::vector<double> b0, b1;
    for (const auto& r : rows) {
      d.add({r.first}, r.second);
      (r.first < 0.5 ? b0 : b1).push_back(std::abs(r.second));
    }
    auto bin_of = [](const std::vector<double>& x) {
      return x[0] < 0.5 ? 0 : 1;
    };
    auto thr = dfp::binwise_split_thresholds(d, s, bin_of, 3, 0.25);
    REQUIRE(thr.size() == 3);
    CHECK(thr[0] == dfp::split_threshold(FiniteSample(b0), 0.25));
    CHECK(thr[1] == dfp::split_threshold(FiniteSample(b1), 0.25));
    CHECK(std::isinf(thr[2]));
  }

  TEST_CASE("group-conditional coverage holds per group") {
    // two groups with very different noise scales
    const double alpha = 0.2;
    Rng rng(19);
    int hits0 = 0, hits1 = 0, tot0 = 0, tot1 = 0;
    const int R = 2000;
    for (int rep = 0; rep < R; ++rep) {
      Dataset d;
      std::vector<double> s0, s1;
      for (int i = 0; i < 30; ++i) {
        int grp = static_cast<int>(rng.below(2));
        double scale = grp == 0 ? 0.1 : 5.0;
        double y = scale * rng.normal();
        d.add({static_cast<double>(grp)}, y);
        (grp == 0 ? s0 : s1).push_back(std::abs(y));
      }
      int grp = static_cast<int>(rng.below(2));
      double scale = grp == 0 ? 0.1 : 5.0;
      double y = scale * rng.normal();
      const auto& sg = grp == 0 ? s0 : s1;
      double q = sg.empty()
                     ? std::numeric_limits<double>::infinity()
                     : dfp::split_threshold(FiniteSample(sg), alpha);
      bool hit = std::abs(y) <= q;
      if (grp == 0) {
        ++tot0;
        hits0 += hit;
      } else {
        ++tot1;
        hits1 += hit;
      }
    }
    CHECK(static_cast<double>(hits0) / tot0 >= 1.0 - alpha - 0.04);
    CHECK(static_cast<double>(hits1) / tot1 >= 1.0 - alpha - 0.04);
  }

  TEST_CASE("selective conformal: select-all rule equals full conformal") {
    ScoreFn s = ScoreFn::from_pretrained(abs_score());
    Rng rng(23);
    Dataset d;
    for (int i = 0; i < 10; ++i) d.add({rng.uniform()}, rng.normal());
    dfp::SelectionRule all = [](const Dataset& aug) {
      std::vector<std::size_t> idx(aug.n());
      for (std::size_t i = 0; i < aug.n(); ++i) idx[i] = i;
      return idx;
    };
    YDomain dom = YDomain::from_grid(-4.0, 4.0, 801);
    PredictionSet sel = dfp::selective_set(s, d, {0.5}, 0.2, all, dom);
    std::vector<double> scores;
    for (double y : d.y) scores.push_back(std::abs(y));
    double q = dfp::split_threshold(FiniteSample(scores), 0.2);
    PredictionSet plain =
        dfp::set_from_domain(dom, [&](double y) { return std::abs(y) <= q; });
    CHECK(sel == plain);
  }

  TEST_CASE("selective conformal excludes y when the test point is dropped") {
    ScoreFn s = ScoreFn::from_pretrained(abs_score());
    Dataset d;
    for (double y : {0.5, -0.8, 1.2, 0.3, -0.4, 0.9}) d.add({0.0}, y);
    // selection keeps only rows with y >= 0: negative hypothesized responses
    // make the test point unselected and are excluded outright
    dfp::SelectionRule rule = [](const Dataset& aug) {
      std::vector<std::size_t> idx;
      for (std::size_t i = 0; i < aug.n(); ++i)
        if (aug.y[i] >= 0.0) idx.push_back(i);
      return idx;
    };
    YDomain dom = YDomain::from_grid(-2.0, 2.0, 401);
    PredictionSet set = dfp::selective_set(s, d, {0.0}, 0.3, rule, dom);
    CHECK(!set.contains(-0.5));
    CHECK(!set.contains(-1.5));
    // oracle for the selected branch: threshold over selected calibration
    std::vector<double> selected = {0.5, 1.2, 0.3, 0.9};
    for (auto& v : selected) v = std::abs(v);
    double q = dfp::split_threshold(FiniteSample(selected), 0.3);
    for (double y : {0.0, 0.2, 0.45, 0.8, 1.1, 1.6})
      CHECK(set.contains(y) == (std::abs(y) <= q));
  }
}
