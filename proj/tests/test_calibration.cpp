#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "dfp/calibration.hpp"
#include "dfp/rng.hpp"

using dfp::Calibrator;
using dfp::CalibratorKind;
using dfp::Rng;

namespace {
// exact max-min characterization of the isotonic least-squares fit
std::vector<double> isotonic_oracle(const std::vector<double>& y,
                                    const std::vector<double>& w) {
  const std::size_t n = y.size();
  std::vector<double> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i <= k; ++i) {
      double worst = std::numeric_limits<double>::infinity();
      for (std::size_t j = k; j < n; ++j) {
        double num = 0.0, den = 0.0;
        for (std::size_t t = i; t <= j; ++t) {
          num += w[t] * y[t];
          den += w[t];
        }
        worst = std::min(worst, num / den);
      }
      best = std::max(best, worst);
    }
    out[k] = best;
  }
  return out;
}
}  // namespace

TEST_SUITE("calibration") {
  TEST_CASE("pava on the frozen three-point example") {
    auto fit = dfp::pava({1.0, 0.0, 1.0});
    REQUIRE(fit.size() == 3);
    CHECK(fit[0] == doctest::Approx(0.5));
    CHECK(fit[1] == doctest::Approx(0.5));
    CHECK(fit[2] == doctest::Approx(1.0));
  }

  TEST_CASE("pava output is nondecreasing and mean preserving") {
    Rng rng(3);
    for (int rep = 0; rep < 200; ++rep) {
      std::size_t n = 1 + rng.below(20);
      std::vector<double> y(n);
      for (auto& v : y) v = rng.normal();
      auto fit = dfp::pava(y);
      double sy = 0.0, sf = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        if (i > 0) CHECK(fit[i] >= fit[i - 1] - 1e-12);
        sy += y[i];
        sf += fit[i];
      }
      CHECK(sf == doctest::Approx(sy).epsilon(1e-9));
    }
    CHECK_THROWS_AS(dfp::pava({1.0, 2.0}, {1.0}), std::invalid_argument);
    CHECK(dfp::pava({}).empty());
  }

  TEST_CASE("pava matches the exhaustive max-min oracle") {
    Rng rng(5);
    for (int rep = 0; rep < 200; ++rep) {
      std::size_t n = 1 + rng.below(10);
      std::vector<double> y(n), w(n);
      for (std::size_t i = 0; i < n; ++i) {
        y[i] = std::floor(4.0 * rng.uniform());  // ties on purpose
        w[i] = 0.5 + rng.uniform();
      }
      auto fit = dfp::pava(y, w);
      auto oracle = isotonic_oracle(y, w);
      for (std::size_t i = 0; i < n; ++i)
        CHECK(fit[i] == doctest::Approx(oracle[i]).epsilon(1e-9));
    }
  }

  TEST_CASE("binning calibrator: one bin returns the label mean") {
    Calibrator c = dfp::fit_calibrator(CalibratorKind::kBinning,
                                       {0.2, 0.4, 0.9}, {1, 0, 1}, 1);
    for (double z : {0.0, 0.3, 1.0})
      CHECK(c.apply(z) == doctest::Approx(2.0 / 3.0));
  }

  TEST_CASE("binning calibrator: empty bins fall back to one half") {
    Calibrator c = dfp::fit_calibrator(CalibratorKind::kBinning,
                                       {0.05, 0.06}, {1, 1}, 10);
    CHECK(c.apply(0.05) == doctest::Approx(1.0));
    CHECK(c.apply(0.95) == doctest::Approx(0.5));
  }

  TEST_CASE("calibrator input validation") {
    CHECK_THROWS_AS(
        dfp::fit_calibrator(CalibratorKind::kBinning, {}, {}, 10),
        std::invalid_argument);
    CHECK_THROWS_AS(
        dfp::fit_calibrator(CalibratorKind::kBinning, {1.5}, {1}, 10),
        std::invalid_argument);
    CHECK_THROWS_AS(
        dfp::fit_calibrator(CalibratorKind::kBinning, {0.5}, {2}, 10),
        std::invalid_argument);
    CHECK_THROWS_AS(
        dfp::fit_calibrator(CalibratorKind::kBinning, {0.5}, {1}, 0),
        std::invalid_argument);
  }

  TEST_CASE("isotonic calibrator is a nondecreasing step function") {
    Rng rng(7);
    std::vector<double> z(60);
    std::vector<int> y(60);
    for (std::size_t i = 0; i < z.size(); ++i) {
      z[i] = rng.uniform();
      y[i] = rng.uniform() < z[i] ? 1 : 0;
    }
    Calibrator c = dfp::fit_calibrator(CalibratorKind::kIsotonic, z, y);
    double prev = -1.0;
    for (int j = 0; j <= 100; ++j) {
      double v = c.apply(j / 100.0);
      CHECK(v >= prev - 1e-12);
      prev = v;
    }
  }

  TEST_CASE("temperature scaling recovers near-identity on calibrated data") {
    Rng rng(9);
    std::vector<double> z(4000);
    std::vector<int> y(4000);
    for (std::size_t i = 0; i < z.size(); ++i) {
      z[i] = 0.05 + 0.9 * rng.uniform();
      y[i] = rng.uniform() < z[i] ? 1 : 0;
    }
    Calibrator c = dfp::fit_calibrator(CalibratorKind::kTemperature, z, y);
    CHECK(!c.clamped);
    CHECK(std::abs(c.beta0) < 0.3);
    CHECK(std::abs(c.beta1 - 1.0) < 0.3);
  }

  TEST_CASE("temperature scaling clamps on degenerate labels") {
    std::vector<double> z = {0.1, 0.4, 0.6, 0.9};
    std::vector<int> y = {1, 1, 1, 1};
    Calibrator c = dfp::fit_calibrator(CalibratorKind::kTemperature, z, y);
    CHECK(c.clamped);
    CHECK(c.apply(0.5) > 0.99);
  }

  TEST_CASE("binned ece vanishes on perfect binary predictions") {
    std::vector<double> z = {0.0, 1.0, 1.0, 0.0};
    std::vector<int> y = {0, 1, 1, 0};
    auto e = dfp::binned_ece_estimate(z, y, 10);
    CHECK(e.estimate == doctest::Approx(0.0));
    CHECK(e.radius == doctest::Approx(std::sqrt(2.0 * std::log(20.0) / 4.0)));
    CHECK(e.slack == doctest::Approx(std::sqrt(10.0 / 4.0)));
  }

  TEST_CASE("binned ece detects within-bin cancellation only up to binning") {
    // scores 0.25 and 0.75 with exactly matching label frequencies: zero
    std::vector<double> z;
    std::vector<int> y;
    for (int i = 0; i < 4; ++i) {
      z.push_back(0.25);
      y.push_back(i % 4 == 0);
    }
    for (int i = 0; i < 4; ++i) {
      z.push_back(0.75);
      y.push_back(i % 4 != 0);
    }
    auto e = dfp::binned_ece_estimate(z, y, 2);
    CHECK(e.estimate == doctest::Approx(0.0));
  }

  TEST_CASE("discrete plug-in ece") {
    // constant prediction equal to the label mean: exactly zero
    std::vector<double> z = {0.75, 0.75, 0.75, 0.75};
    std::vector<int> y = {1, 1, 1, 0};
    CHECK(dfp::ece_discrete(z, y) == doctest::Approx(0.0));
    // two-value predictor, both values exactly calibrated
    std::vector<double> z2 = {0.5, 0.5, 1.0, 1.0};
    std::vector<int> y2 = {0, 1, 1, 1};
    CHECK(dfp::ece_discrete(z2, y2) == doctest::Approx(0.0));
    // miscalibrated constant
    CHECK(dfp::ece_discrete({0.3, 0.3}, {1, 1}) == doctest::Approx(0.7));
  }

  TEST_CASE("continuous-looking scores are refused with a pointer to the "
            "distance-to-calibration estimator") {
    Rng rng(11);
    std::vector<double> z(300);
    std::vector<int> y(300);
    for (std::size_t i = 0; i < z.size(); ++i) {
      z[i] = rng.uniform();
      y[i] = 0;
    }
    try {
      dfp::ece_discrete(z, y, 100);
      FAIL("expected a refusal");
    } catch (const std::invalid_argument& e) {
      CHECK(std::string(e.what()).find("dce_estimate") != std::string::npos);
    }
  }

  TEST_CASE("distance-to-calibration estimate and upper confidence") {
    // constant 0.3 prediction vs Bernoulli(0.5) truth: population dCE = 0.2
    Rng rng(13);
    const std::size_t n = 4000;
    std::vector<double> z(n, 0.3);
    std::vector<int> y(n);
    for (auto& v : y) v = rng.below(2) ? 1 : 0;
    auto d = dfp::dce_estimate(z, y, 10);
    CHECK(d.upper_confidence >= 0.2);
    CHECK(d.estimate == doctest::Approx(0.2).epsilon(0.35));
    CHECK(d.upper_confidence ==
          doctest::Approx(d.estimate + 0.1 +
                          std::sqrt(2.0 * std::log(20.0) / n)));
  }

  TEST_CASE("venn-abers on frozen examples") {
    // empty calibration: the two candidate probabilities are the two
    // hypothesized labels themselves
    auto e = dfp::venn_abers({}, {}, 0.5);
    CHECK(e.first == doctest::Approx(0.0));
    CHECK(e.second == doctest::Approx(1.0));
    // all labels one, test score above all: hypothesizing label 1 stays 1
    std::vector<double> z = {0.1, 0.2, 0.3};
    std::vector<int> y = {1, 1, 1};
    auto p = dfp::venn_abers(z, y, 0.9);
    CHECK(p.second == doctest::Approx(1.0));
    CHECK(p.first == doctest::Approx(0.75));  // pooled (1,1,1,0) block
    CHECK(p.first <= p.second);
  }

  TEST_CASE("venn-abers brackets the truth on well specified data") {
    Rng rng(17);
    int inside = 0;
    const int R = 400;
    for (int rep = 0; rep < R; ++rep) {
      const std::size_t n = 150;
      std::vector<double> z(n);
      std::vector<int> y(n);
      for (std::size_t i = 0; i < n; ++i) {
        z[i] = rng.uniform();
        y[i] = rng.uniform() < z[i] ? 1 : 0;
      }
      double fx = 0.2 + 0.6 * rng.uniform();
      auto p = dfp::venn_abers(z, y, fx);
      CHECK(p.first <= p.second + 1e-12);
      if (fx >= p.first - 0.15 && fx <= p.second + 0.15) ++inside;
    }
    CHECK(static_cast<double>(inside) / R > 0.9);
  }
}
