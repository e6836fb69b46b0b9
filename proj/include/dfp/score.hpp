#ifndef DFP_SCORE_HPP_
#define DFP_SCORE_HPP_

#include <functional>
#include <vector>

#include "dfp/dataset.hpp"
#include "dfp/predictor.hpp"

namespace dfp {

// s(x, y): larger = less conforming.
using PointScore = std::function<double(const std::vector<double>&, double)>;
// A symmetric refit recipe: dataset -> trained point score. Must depend on
// the dataset only through its multiset of rows.
using ScoreRecipe = std::function<PointScore(const Dataset&)>;

// Either a pretrained score or a refit recipe.
struct ScoreFn {
  PointScore pretrained;
  ScoreRecipe recipe;

  bool is_pretrained() const { return static_cast<bool>(pretrained); }
  // pretrained score, or the recipe trained on `context`
  PointScore trained_on(const Dataset& context) const {
    return is_pretrained() ? pretrained : recipe(context);
  }
  static ScoreFn from_pretrained(PointScore s) { return {std::move(s), {}}; }
  static ScoreFn from_recipe(ScoreRecipe r) { return {{}, std::move(r)}; }
};

double eval_score(const ScoreFn& s, const Dataset& context,
                  const std::vector<double>& x, double y);

// S[i][j] = score of row i (rows 0..n-1 of `data`, row n = hypothesized test
// point) under the model trained on data augmented with (test_x, y_grid[j]).
std::vector<std::vector<double>> score_matrix(const ScoreFn& s,
                                              const Dataset& data,
                                              const std::vector<double>& test_x,
                                              const std::vector<double>& y_grid);

// --- score catalog over fitted predictors ---

// |y - f(x)|
PointScore residual_score(const Predictor& f);
// |y - f(x)| / max(sigma(x), 1e-8)
PointScore scaled_residual_score(const Predictor& f, const Predictor& sigma);
// max{ q(x; alpha/2) - y, y - q(x; 1 - alpha/2) }
PointScore cqr_score(const Predictor& quantile_model, double alpha);
// -P(y | x); y is a label index
PointScore high_probability_score(const Predictor& classprob);
// sum of P(y'|x) over labels y' strictly more likely than y
PointScore cumulative_probability_score(const Predictor& classprob);
// -f(y | x)
PointScore high_density_score(const Predictor& density_model);

// Refit recipes (fit the predictor on the given dataset, then score).
ScoreRecipe residual_refit(const PredictorSpec& spec);
ScoreRecipe high_probability_refit(const PredictorSpec& spec);
ScoreRecipe high_density_refit(const PredictorSpec& spec);

}  // namespace dfp

#endif  // DFP_SCORE_HPP_
