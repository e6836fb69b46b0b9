#include <doctest.h>

#include <cmath>
#include <vector>

#include "dfp/weighted.hpp"
#include "dfp/rng.hpp"

using dfp::Dataset;
using dfp::FiniteSample;
using dfp::LikelihoodRatio;
using dfp::LocalizationKernel;
using dfp::PredictionSet;
using dfp::Rng;
using dfp::ScoreFn;
using dfp::YDomain;

namespace {
dfp::PointScore abs_score() {
  return [](const std::vector<double>&, double y) { return std::abs(y); };
}

Dataset gen_data(Rng& rng, int n) {
  Dataset d;
  for (int i = 0; i < n; ++i) d.add({rng.uniform()}, rng.normal());
  return d;
}
}  // namespace

TEST_SUITE("weighted") {
  TEST_CASE("unit likelihood ratio gives uniform weights") {
    LikelihoodRatio lr =
        LikelihoodRatio::covariate([](const std::vector<double>&) { return 1.0; });
    Rng rng(3);
    Dataset d = gen_data(rng, 9);
    auto w = dfp::shift_weights(lr, d, {0.5}, 0.0);
    REQUIRE(w.size() == 10);
    for (double v : w) CHECK(v == doctest::Approx(0.1).epsilon(1e-12));
  }

  TEST_CASE("weights are invariant to rescaling the ratio") {
    Rng rng(5);
    Dataset d = gen_data(rng, 7);
    LikelihoodRatio lr = LikelihoodRatio::covariate(
        [](const std::vector<double>& x) { return std::exp(x[0]); });
    LikelihoodRatio lr3 = LikelihoodRatio::covariate(
        [](const std::vector<double>& x) { return 3.0 * std::exp(x[0]); });
    auto w1 = dfp::shift_weights(lr, d, {0.5}, 0.0);
    auto w2 = dfp::shift_weights(lr3, d, {0.5}, 0.0);
    for (std::size_t i = 0; i < w1.size(); ++i)
      CHECK(w1[i] == doctest::Approx(w2[i]).epsilon(1e-12));
  }

  TEST_CASE("all-zero ratios are rejected") {
    LikelihoodRatio lr =
        LikelihoodRatio::covariate([](const std::vector<double>&) { return 0.0; });
    Rng rng(7);
    Dataset d = gen_data(rng, 4);
    CHECK_THROWS_AS(dfp::shift_weights(lr, d, {0.5}, 0.0),
                    std::invalid_argument);
    LikelihoodRatio neg =
        LikelihoodRatio::covariate([](const std::vector<double>&) { return -1.0; });
    CHECK_THROWS_AS(dfp::shift_weights(neg, d, {0.5}, 0.0),
                    std::invalid_argument);
  }

  TEST_CASE("uniform weighted split equals plain split conformal") {
    dfp::PointScore s = abs_score();
    Rng rng(11);
    Dataset d = gen_data(rng, 14);
    LikelihoodRatio lr =
        LikelihoodRatio::covariate([](const std::vector<double>&) { return 1.0; });
    YDomain dom = YDomain::from_grid(-4.0, 4.0, 1601);
    PredictionSet wset = dfp::weighted_split_set(s, d, {0.5}, 0.2, lr, dom);
    PredictionSet plain = dfp::split_set(s, d, {0.5}, 0.2, dom);
    CHECK(wset == plain);
  }

  TEST_CASE("test weight one yields the whole domain") {
    dfp::PointScore s = abs_score();
    Dataset d;
    for (double y : {0.1, 0.2, 0.3}) d.add({0.0}, y);
    // ratio vanishes on every calibration point, positive at the test point
    LikelihoodRatio lr = LikelihoodRatio::covariate(
        [](const std::vector<double>& x) { return x[0] > 0.5 ? 1.0 : 0.0; });
    YDomain dom = YDomain::from_grid(-2.0, 2.0, 401);
    PredictionSet set = dfp::weighted_split_set(s, d, {1.0}, 0.2, lr, dom);
    CHECK(set.kind() == PredictionSet::Kind::kAll);
  }

  TEST_CASE("weighted split requires a covariate-shift ratio") {
    dfp::PointScore s = abs_score();
    Rng rng(13);
    Dataset d = gen_data(rng, 5);
    LikelihoodRatio lr = LikelihoodRatio::label([](double) { return 1.0; });
    YDomain dom = YDomain::from_grid(-2.0, 2.0, 101);
    CHECK_THROWS_AS(dfp::weighted_split_set(s, d, {0.5}, 0.2, lr, dom),
                    std::invalid_argument);
  }

  TEST_CASE("uniform weighted full conformal equals ordinary full conformal") {
    ScoreFn s = ScoreFn::from_pretrained(abs_score());
    Rng rng(17);
    Dataset d = gen_data(rng, 9);
    LikelihoodRatio lr =
        LikelihoodRatio::covariate([](const std::vector<double>&) { return 1.0; });
    YDomain dom = YDomain::from_grid(-4.0, 4.0, 801);
    PredictionSet wset = dfp::weighted_full_set(s, d, {0.5}, 0.2, lr, dom);
    // oracle: plain conformal p-value per grid candidate
    PredictionSet oracle = dfp::set_from_domain(dom, [&](double y) {
      std::vector<double> scores;
      for (double yy : d.y) scores.push_back(std::abs(yy));
      scores.push_back(std::abs(y));
      return dfp::conformal_pvalue(scores) > 0.2;
    });
    CHECK(wset == oracle);
  }

  TEST_CASE("an overwhelming calibration weight can exclude the test point") {
    ScoreFn s = ScoreFn::from_pretrained(abs_score());
    Dataset d;
    d.add({5.0}, 0.001);  // tiny score, enormous weight
    for (double y : {0.5, 0.6, 0.7, 0.8}) d.add({0.0}, y);
    LikelihoodRatio lr = LikelihoodRatio::covariate(
        [](const std::vector<double>& x) { return x[0] > 2.0 ? 1e9 : 1.0; });
    YDomain dom = YDomain::from_grid(-2.0, 2.0, 801);
    PredictionSet set = dfp::weighted_full_set(s, d, {0.0}, 0.2, lr, dom);
    // almost all mass sits on the score 0.001 atom: only |y| <= 0.001 survives
    CHECK(set.contains(0.0));
    CHECK(!set.contains(0.5));
    CHECK(!set.contains(-0.5));
  }

  TEST_CASE("fixed weights: uniform case matches ordinary conformal") {
    ScoreFn s = ScoreFn::from_pretrained(abs_score());
    Rng rng(19);
    Dataset d = gen_data(rng, 9);
    std::vector<double> w(10, 0.1);
    YDomain dom = YDomain::from_grid(-4.0, 4.0, 801);
    PredictionSet fixed = dfp::fixed_weight_set(s, d, {0.5}, 0.2, w, dom);
    LikelihoodRatio lr =
        LikelihoodRatio::covariate([](const std::vector<double>&) { return 1.0; });
    PredictionSet wfull = dfp::weighted_full_set(s, d, {0.5}, 0.2, lr, dom);
    CHECK(fixed == wfull);
  }

  TEST_CASE("fixed weights validate the dominance and sum conditions") {
    ScoreFn s = ScoreFn::from_pretrained(abs_score());
    Rng rng(23);
    Dataset d = gen_data(rng, 3);
    YDomain dom = YDomain::from_grid(-2.0, 2.0, 101);
    // test weight below the max calibration weight
    CHECK_THROWS_AS(
        dfp::fixed_weight_set(s, d, {0.5}, 0.2, {0.4, 0.2, 0.2, 0.2}, dom),
        std::invalid_argument);
    // weights not summing to one
    CHECK_THROWS_AS(
        dfp::fixed_weight_set(s, d, {0.5}, 0.2, {0.2, 0.2, 0.2, 0.5}, dom),
        std::invalid_argument);
    // wrong length
    CHECK_THROWS_AS(dfp::fixed_weight_set(s, d, {0.5}, 0.2, {0.5, 0.5}, dom),
                    std::invalid_argument);
  }

  TEST_CASE("constant localization kernel reduces to full conformal") {
    ScoreFn s = ScoreFn::from_pretrained(abs_score());
    Rng rng(29);
    Dataset d = gen_data(rng, 8);
    LocalizationKernel kernel;
    kernel.H = [](const std::vector<double>&, const std::vector<double>&) {
      return 1.0;
    };
    YDomain dom = YDomain::from_grid(-4.0, 4.0, 801);
    PredictionSet loc = dfp::localized_set(s, d, {0.5}, 0.2, kernel, dom);
    PredictionSet oracle = dfp::set_from_domain(dom, [&](double y) {
      std::vector<double> scores;
      for (double yy : d.y) scores.push_back(std::abs(yy));
      scores.push_back(std::abs(y));
      return dfp::conformal_pvalue(scores) > 0.2;
    });
    CHECK(loc == oracle);
  }

  TEST_CASE("localized set is invariant to kernel rescaling") {
    ScoreFn s = ScoreFn::from_pretrained(abs_score());
    Rng rng(31);
    Dataset d = gen_data(rng, 8);
    LocalizationKernel k1, k3;
    k1.H = [](const std::vector<double>& a, const std::vector<double>& b) {
      return std::exp(-std::abs(a[0] - b[0]));
    };
    k3.H = [](const std::vector<double>& a, const std::vector<double>& b) {
      return 3.0 * std::exp(-std::abs(a[0] - b[0]));
    };
    YDomain dom = YDomain::from_grid(-4.0, 4.0, 401);
    CHECK(dfp::localized_set(s, d, {0.5}, 0.2, k1, dom) ==
          dfp::localized_set(s, d, {0.5}, 0.2, k3, dom));
  }

  TEST_CASE("randomly localized conformal with a point-mass sampler") {
    ScoreFn s = ScoreFn::from_pretrained(abs_score());
    Rng rng(37);
    Dataset d = gen_data(rng, 8);
    const std::vector<double> x0 = {0.25};
    LocalizationKernel kernel;
    kernel.H = [](const std::vector<double>& a, const std::vector<double>& b) {
      return std::exp(-std::abs(a[0] - b[0]));
    };
    kernel.sampler = [x0](const std::vector<double>&, Rng&) { return x0; };
    YDomain dom = YDomain::from_grid(-4.0, 4.0, 401);
    auto [set, x_tilde] =
        dfp::randomly_localized_set(s, d, {0.5}, 0.2, kernel, 99, dom);
    REQUIRE(x_tilde == x0);
    // equivalent weighted full conformal with ratio H(., x_tilde)
    LikelihoodRatio lr = LikelihoodRatio::covariate(
        [&](const std::vector<double>& z) { return kernel.H(z, x0); });
    PredictionSet wfull = dfp::weighted_full_set(s, d, {0.5}, 0.2, lr, dom);
    CHECK(set == wfull);
  }

  TEST_CASE("randomly localized conformal requires a sampler") {
    ScoreFn s = ScoreFn::from_pretrained(abs_score());
    Rng rng(41);
    Dataset d = gen_data(rng, 4);
    LocalizationKernel kernel;
    kernel.H = [](const std::vector<double>&, const std::vector<double>&) {
      return 1.0;
    };
    YDomain dom = YDomain::from_grid(-2.0, 2.0, 101);
    CHECK_THROWS_AS(
        dfp::randomly_localized_set(s, d, {0.5}, 0.2, kernel, 1, dom),
        std::invalid_argument);
  }

  TEST_CASE("weighted split coverage under covariate shift") {
    // heteroskedastic truth; shifted test distribution
    const double alpha = 0.2;
    Rng rng(43);
    int hits = 0;
    const int R = 2000, n = 60;
    LikelihoodRatio lr = LikelihoodRatio::covariate(
        [](const std::vector<double>& x) { return std::exp(x[0] - 0.5); });
    for (int rep = 0; rep < R; ++rep) {
      Dataset d;
      std::vector<double> vals(static_cast<std::size_t>(n) + 1), w;
      std::vector<double> ratios(static_cast<std::size_t>(n) + 1);
      for (int i = 0; i < n; ++i) {
        double x = rng.normal();
        double y = (0.5 + std::abs(x)) * rng.normal();
        vals[static_cast<std::size_t>(i)] = std::abs(y);
        ratios[static_cast<std::size_t>(i)] = std::exp(x - 0.5);
      }
      double xt = 1.0 + rng.normal();
      double yt = (0.5 + std::abs(xt)) * rng.normal();
      vals[n] = std::numeric_limits<double>::infinity();
      ratios[n] = std::exp(xt - 0.5);
      double total = 0.0;
      for (double v : ratios) total += v;
      for (double v : ratios) w.push_back(v / total);
      double q = dfp::WeightedEmpirical(vals, w).quantile(1.0 - alpha);
      if (std::abs(yt) <= q) ++hits;
    }
    CHECK(static_cast<double>(hits) / R >= 1.0 - alpha - 0.03);
  }
}
