#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "dfp/quantile.hpp"
#include "dfp/rng.hpp"

using dfp::FiniteSample;
using dfp::Rng;
using dfp::WeightedEmpirical;

namespace {
const double kInf = std::numeric_limits<double>::infinity();
const double kNaN = std::numeric_limits<double>::quiet_NaN();
}  // namespace

TEST_SUITE("quantile") {
  TEST_CASE("order statistic on frozen examples") {
    FiniteSample a({3.0, 2.0, 1.0, 2.0});
    CHECK(a.order_statistic(1) == 1.0);
    CHECK(a.order_statistic(2) == 2.0);
    CHECK(a.order_statistic(3) == 2.0);
    CHECK(a.order_statistic(4) == 3.0);

    FiniteSample b({0.4, 0.1, 0.3, 0.2});
    CHECK(b.order_statistic(3) == 0.3);

    FiniteSample c({5.0});
    CHECK(c.order_statistic(1) == 5.0);

    CHECK_THROWS_AS(a.order_statistic(0), std::out_of_range);
    CHECK_THROWS_AS(a.order_statistic(5), std::out_of_range);
  }

  TEST_CASE("empirical cdf on frozen examples") {
    FiniteSample z({1.0, 1.0, 2.0, 3.0, 4.0});
    CHECK(z.empirical_cdf(2.0) == doctest::Approx(0.6));
    CHECK(z.empirical_cdf(1.0) == doctest::Approx(0.4));
    CHECK(z.empirical_cdf(0.5) == 0.0);
    CHECK(z.empirical_cdf(-kInf) == 0.0);
    CHECK(z.empirical_cdf(kInf) == 1.0);
    CHECK_THROWS_AS(z.empirical_cdf(kNaN), std::invalid_argument);
  }

  TEST_CASE("quantile on frozen examples") {
    FiniteSample z({1.0, 1.0, 2.0, 3.0, 4.0});
    CHECK(z.quantile(0.5) == 2.0);
    CHECK(z.quantile(0.1) == 1.0);
    CHECK(z.quantile(1.0) == 4.0);
    CHECK(z.quantile(1.2) == kInf);
    CHECK(z.quantile(0.0) == -kInf);
    CHECK(z.quantile(-0.3) == -kInf);
  }

  TEST_CASE("construction rejects bad input") {
    CHECK_THROWS_AS(FiniteSample({}), std::invalid_argument);
    CHECK_THROWS_AS(FiniteSample({1.0, kNaN}), std::invalid_argument);
    CHECK_THROWS_AS(FiniteSample({1.0, kInf}), std::invalid_argument);
  }

  TEST_CASE("near-integer levels snap to the exact order statistic") {
    // (1 - 0.1) * (1 + 1/99) * 99 evaluates slightly above 90 in doubles;
    // the quantile must still pick the 90th order statistic.
    std::vector<double> v(99);
    for (int i = 0; i < 99; ++i) v[static_cast<std::size_t>(i)] = i + 1.0;
    FiniteSample z(v);
    double tau = (1.0 - 0.1) * (1.0 + 1.0 / 99.0);
    CHECK(z.quantile(tau) == 90.0);
    CHECK(z.quantile(tau) == z.order_statistic(90));
  }

  TEST_CASE("weighted quantile on frozen examples") {
    WeightedEmpirical w({1.0, 2.0, 3.0}, {0.5, 0.25, 0.25});
    CHECK(w.quantile(0.5) == 1.0);
    CHECK(w.quantile(0.6) == 2.0);
    CHECK(w.quantile(1.0) == 3.0);
    CHECK(w.quantile(1.5) == kInf);
    CHECK(w.quantile(0.0) == -kInf);

    WeightedEmpirical single({7.5}, {1.0});
    CHECK(single.quantile(0.7) == 7.5);
  }

  TEST_CASE("weighted quantile validates weights") {
    CHECK_THROWS_AS(WeightedEmpirical({1.0, 2.0}, {0.9, 0.3}),
                    std::invalid_argument);
    CHECK_THROWS_AS(WeightedEmpirical({1.0, 2.0}, {1.2, -0.2}),
                    std::invalid_argument);
    CHECK_THROWS_AS(WeightedEmpirical({kInf, kInf}, {0.5, 0.5}),
                    std::invalid_argument);
    CHECK_THROWS_AS(WeightedEmpirical({-kInf, 1.0}, {0.5, 0.5}),
                    std::invalid_argument);
    CHECK_THROWS_AS(WeightedEmpirical({1.0}, {kNaN}), std::invalid_argument);
    // exactly one +inf atom is allowed
    WeightedEmpirical ok({1.0, kInf}, {0.5, 0.5});
    CHECK(ok.quantile(0.75) == kInf);
  }

  TEST_CASE("equal weights reproduce the unweighted quantile") {
    Rng rng(11);
    for (int rep = 0; rep < 50; ++rep) {
      std::size_t n = 1 + rng.below(20);
      std::vector<double> v(n), w(n, 1.0 / static_cast<double>(n));
      for (auto& x : v) x = rng.normal();
      FiniteSample fs(v);
      WeightedEmpirical we(v, w);
      for (int j = 0; j <= 40; ++j) {
        double tau = j / 40.0;
        CHECK(fs.quantile(tau) == we.quantile(tau));
      }
    }
  }

  TEST_CASE("augmented threshold equivalence on frozen examples") {
    FiniteSample v({1.0, 2.0, 3.0});
    auto r1 = dfp::augmented_threshold_equiv(v, 2.5, 0.5);
    CHECK(r1.first == false);
    CHECK(r1.second == false);
    CHECK(r1.first == r1.second);

    auto r2 = dfp::augmented_threshold_equiv(v, 0.0, 0.5);
    CHECK(r2.first == true);
    CHECK(r2.second == true);

    // level above 1 after inflation: quantile is +inf, both sides true
    auto r3 = dfp::augmented_threshold_equiv(v, 100.0, 0.99);
    CHECK(r3.first == r3.second);
    CHECK(r3.first == true);
  }

  TEST_CASE("augmented threshold equivalence holds on random instances") {
    Rng rng(101);
    int checked = 0;
    for (int rep = 0; rep < 100000; ++rep) {
      std::size_t n = 1 + rng.below(12);
      std::vector<double> v(n);
      for (auto& x : v) x = rng.normal();
      FiniteSample fs(v);
      double v_new = rng.normal();
      double t = rng.uniform() * 1.2;
      auto r = dfp::augmented_threshold_equiv(fs, v_new, t);
      if (r.first != r.second) {
        CAPTURE(n);
        CAPTURE(v_new);
        CAPTURE(t);
        REQUIRE(r.first == r.second);
      }
      ++checked;
    }
    CHECK(checked == 100000);
  }

  TEST_CASE("quantile and cdf form a Galois pair") {
    Rng rng(202);
    for (int rep = 0; rep < 500; ++rep) {
      std::size_t n = 1 + rng.below(15);
      std::vector<double> v(n);
      for (auto& x : v) x = rng.normal();
      FiniteSample fs(v);
      double y = rng.normal();
      // Quantile(F(y)) <= y whenever F(y) > 0
      double fy = fs.empirical_cdf(y);
      if (fy > 0.0) CHECK(fs.quantile(fy) <= y);
      // F(Quantile(tau)) >= tau for tau in (0,1]
      double tau = rng.uniform_pos();
      CHECK(fs.empirical_cdf(fs.quantile(tau)) >= tau);
    }
  }

  TEST_CASE("quantile is permutation invariant and monotone equivariant") {
    Rng rng(303);
    for (int rep = 0; rep < 200; ++rep) {
      std::size_t n = 1 + rng.below(10);
      std::vector<double> v(n);
      for (auto& x : v) x = rng.normal();
      std::vector<double> shuffled = v;
      for (std::size_t i = n; i > 1; --i)
        std::swap(shuffled[i - 1], shuffled[rng.below(i)]);
      FiniteSample a(v), b(shuffled);
      double tau = rng.uniform_pos();
      CHECK(a.quantile(tau) == b.quantile(tau));

      // strictly increasing transform commutes with the quantile
      std::vector<double> fv(n);
      for (std::size_t i = 0; i < n; ++i) fv[i] = std::atan(v[i]);
      FiniteSample c(fv);
      CHECK(c.quantile(tau) == doctest::Approx(std::atan(a.quantile(tau))));
    }
  }

  TEST_CASE("weighted quantile matches a cumulative-weight oracle") {
    Rng rng(404);
    for (int rep = 0; rep < 300; ++rep) {
      std::size_t n = 1 + rng.below(8);
      std::vector<double> v(n), w(n);
      double s = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        v[i] = std::floor(rng.uniform() * 4.0);  // force ties
        w[i] = rng.uniform_pos();
        s += w[i];
      }
      for (auto& x : w) x /= s;
      WeightedEmpirical we(v, w);
      double tau = rng.uniform_pos();
      // oracle: smallest value whose total weight at or below reaches tau
      std::vector<double> sv = v;
      std::sort(sv.begin(), sv.end());
      double best = kInf;
      for (double cand : sv) {
        double cum = 0.0;
        for (std::size_t i = 0; i < n; ++i)
          if (v[i] <= cand) cum += w[i];
        if (cum >= tau - 1e-12) {
          best = cand;
          break;
        }
      }
      CHECK(we.quantile(tau) == best);
    }
  }
}
