#include "dfp/score.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dfp {

double eval_score(const ScoreFn& s, const Dataset& context,
                  const std::vector<double>& x, double y) {
  return s.trained_on(context)(x, y);
}

std::vector<std::vector<double>> score_matrix(
    const ScoreFn& s, const Dataset& data, const std::vector<double>& test_x,
    const std::vector<double>& y_grid) {
  const std::size_t n = data.n();
  std::vector<std::vector<double>> out(n + 1,
                                       std::vector<double>(y_grid.size()));
  for (std::size_t j = 0; j < y_grid.size(); ++j) {
    Dataset aug = data.with_point(test_x, y_grid[j]);
    PointScore sc = s.trained_on(aug);
    for (std::size_t i = 0; i < n; ++i) out[i][j] = sc(data.x[i], data.y[i]);
    out[n][j] = sc(test_x, y_grid[j]);
  }
  return out;
}

PointScore residual_score(const Predictor& f) {
  return [f](const std::vector<double>& x, double y) {
    return std::abs(y - f.predict(x));
  };
}

PointScore scaled_residual_score(const Predictor& f, const Predictor& sigma) {
  return [f, sigma](const std::vector<double>& x, double y) {
    double s = std::max(sigma.predict(x), 1e-8);
    return std::abs(y - f.predict(x)) / s;
  };
}

PointScore cqr_score(const Predictor& quantile_model, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::invalid_argument("cqr_score: alpha in (0,1) required");
  return [quantile_model, alpha](const std::vector<double>& x, double y) {
    double lo = quantile_model.quantile(x, alpha / 2.0);
    double hi = quantile_model.quantile(x, 1.0 - alpha / 2.0);
    return std::max(lo - y, y - hi);
  };
}

PointScore high_probability_score(const Predictor& classprob) {
  return [classprob](const std::vector<double>& x, double y) {
    return -classprob.class_prob(x, static_cast<int>(y));
  };
}

PointScore cumulative_probability_score(const Predictor& classprob) {
  return [classprob](const std::vector<double>& x, double y) {
    int label = static_cast<int>(y);
    double p_y = classprob.class_prob(x, label);
    double s = 0.0;
    // strictly more likely labels only; ties excluded
    for (int l = 0; l < classprob.num_labels(); ++l) {
      double p = classprob.class_prob(x, l);
      if (p > p_y) s += p;
    }
    return s;
  };
}

PointScore high_density_score(const Predictor& density_model) {
  return [density_model](const std::vector<double>& x, double y) {
    return -density_model.density(x, y);
  };
}

ScoreRecipe residual_refit(const PredictorSpec& spec) {
  return [spec](const Dataset& d) {
    return residual_score(Predictor::fit(spec, d));
  };
}

ScoreRecipe high_probability_refit(const PredictorSpec& spec) {
  return [spec](const Dataset& d) {
    return high_probability_score(Predictor::fit(spec, d));
  };
}

ScoreRecipe high_density_refit(const PredictorSpec& spec) {
  return [spec](const Dataset& d) {
    return high_density_score(Predictor::fit(spec, d));
  };
}

}  // namespace dfp
