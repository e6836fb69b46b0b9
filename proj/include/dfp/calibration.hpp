#ifndef DFP_CALIBRATION_HPP_
#define DFP_CALIBRATION_HPP_

#include <cstddef>
#include <utility>
#include <vector>

namespace dfp {

enum class CalibratorKind { kBinning, kIsotonic, kTemperature };

// A fitted map h : [0,1] -> [0,1] recalibrating raw scores to probabilities.
struct Calibrator {
  CalibratorKind kind = CalibratorKind::kBinning;
  // binning: equal-width bins, per-bin mean of y (1/2 for empty bins)
  int num_bins = 10;
  std::vector<double> bin_value;
  // isotonic: breakpoints (sorted distinct z) and fitted nondecreasing levels
  std::vector<double> iso_z;
  std::vector<double> iso_level;
  // temperature: h(z) = sigmoid(b0 + b1 logit(z)), Newton-fitted
  double beta0 = 0.0, beta1 = 1.0;
  bool clamped = false;  // |beta| hit the 50 bound (degenerate labels)

  double apply(double z) const;
};

// scores = f(X_i) in [0,1], labels in {0,1}.
Calibrator fit_calibrator(CalibratorKind kind,
                          const std::vector<double>& scores,
                          const std::vector<int>& labels, int num_bins = 10);

// Exact least-squares nondecreasing fit (pool-adjacent-violators) of y
// against the given (already x-sorted) sequence, with optional weights.
std::vector<double> pava(const std::vector<double>& y,
                         const std::vector<double>& weights = {});

// sum_k |sum_{i in bin k} (Y_i - f(X_i))| / n over an equal-width partition
// into num_bins bins of (0,1]; 0 falls in bin 1. Reported with the
// high-probability radius sqrt(2 log(1/delta) / n) and bin slack sqrt(K/n).
struct BinnedEce {
  double estimate = 0.0;
  double radius = 0.0;
  double slack = 0.0;
};
BinnedEce binned_ece_estimate(const std::vector<double>& scores,
                              const std::vector<int>& labels, int num_bins,
                              double delta = 0.05);

// Plug-in ECE for a discrete-output f with at most max_values distinct
// outputs; throws when f looks continuous (use dce_estimate instead).
double ece_discrete(const std::vector<double>& scores,
                    const std::vector<int>& labels,
                    std::size_t max_values = 100);

// Distance to calibration: (1/n) sum_k |sum_{f(X_i) in B_k} (Y_i - k/K)|
// over equal-width bins; estimate + 1/K + sqrt(2 log(1/delta)/n) upper-bounds
// the population dCE with probability >= 1 - delta.
struct DceEstimate {
  double estimate = 0.0;
  double upper_confidence = 0.0;
};
DceEstimate dce_estimate(const std::vector<double>& scores,
                         const std::vector<int>& labels, int K,
                         double delta = 0.05);

// Venn-Abers: isotonic fits on the two label-augmented datasets; returns
// [p0, p1], the two candidate calibrated probabilities at test_fx.
std::pair<double, double> venn_abers(const std::vector<double>& scores,
                                     const std::vector<int>& labels,
                                     double test_fx);

}  // namespace dfp

#endif  // DFP_CALIBRATION_HPP_
