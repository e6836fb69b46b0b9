#include "dfp/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace dfp {

namespace {

// equal-width partition of (0,1]: bin k = ((k-1)/K, k/K], 0 in bin 1
int bin_of(double z, int K) {
  if (z <= 0.0) return 0;
  int b = static_cast<int>(std::ceil(z * K)) - 1;
  if (b < 0) b = 0;
  if (b >= K) b = K - 1;
  return b;
}

void check_inputs(const std::vector<double>& scores,
                  const std::vector<int>& labels) {
  if (scores.empty() || scores.size() != labels.size())
    throw std::invalid_argument("calibration: bad input sizes");
  for (double z : scores)
    if (!(z >= 0.0 && z <= 1.0))
      throw std::invalid_argument("calibration: score outside [0,1]");
  for (int y : labels)
    if (y != 0 && y != 1)
      throw std::invalid_argument("calibration: labels must be 0/1");
}

double logit_clipped(double z) {
  z = std::min(std::max(z, 1e-12), 1.0 - 1e-12);
  return std::log(z / (1.0 - z));
}

double sigmoid(double t) { return 1.0 / (1.0 + std::exp(-t)); }

// deterministic (value, index) order
std::vector<std::size_t> sorted_order(const std::vector<double>& v) {
  std::vector<std::size_t> idx(v.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    if (v[a] != v[b]) return v[a] < v[b];
    return a < b;
  });
  return idx;
}

}  // namespace

std::vector<double> pava(const std::vector<double>& y,
                         const std::vector<double>& weights) {
  const std::size_t n = y.size();
  if (n == 0) return {};
  std::vector<double> w = weights.empty() ? std::vector<double>(n, 1.0)
                                          : weights;
  if (w.size() != n) throw std::invalid_argument("pava: weight size mismatch");
  // blocks of (mean, weight, count)
  std::vector<double> mean, bw;
  std::vector<std::size_t> count;
  for (std::size_t i = 0; i < n; ++i) {
    mean.push_back(y[i]);
    bw.push_back(w[i]);
    count.push_back(1);
    while (mean.size() > 1 && mean[mean.size() - 2] >= mean.back()) {
      double tw = bw[bw.size() - 2] + bw.back();
      double tm = (mean[mean.size() - 2] * bw[bw.size() - 2] +
                   mean.back() * bw.back()) /
                  tw;
      std::size_t tc = count[count.size() - 2] + count.back();
      mean.pop_back();
      bw.pop_back();
      count.pop_back();
      mean.back() = tm;
      bw.back() = tw;
      count.back() = tc;
    }
  }
  std::vector<double> out;
  out.reserve(n);
  for (std::size_t b = 0; b < mean.size(); ++b)
    out.insert(out.end(), count[b], mean[b]);
  return out;
}

double Calibrator::apply(double z) const {
  switch (kind) {
    case CalibratorKind::kBinning:
      return bin_value[bin_of(z, num_bins)];
    case CalibratorKind::kIsotonic: {
      if (iso_z.empty()) return 0.5;
      // step function: level of the rightmost breakpoint <= z
      auto it = std::upper_bound(iso_z.begin(), iso_z.end(), z);
      if (it == iso_z.begin()) return iso_level.front();
      return iso_level[static_cast<std::size_t>(it - iso_z.begin()) - 1];
    }
    case CalibratorKind::kTemperature:
      return sigmoid(beta0 + beta1 * logit_clipped(z));
  }
  return 0.5;
}

Calibrator fit_calibrator(CalibratorKind kind,
                          const std::vector<double>& scores,
                          const std::vector<int>& labels, int num_bins) {
  check_inputs(scores, labels);
  Calibrator c;
  c.kind = kind;
  switch (kind) {
    case CalibratorKind::kBinning: {
      if (num_bins < 1) throw std::invalid_argument("binning: num_bins >= 1");
      c.num_bins = num_bins;
      std::vector<double> sum(num_bins, 0.0), cnt(num_bins, 0.0);
      for (std::size_t i = 0; i < scores.size(); ++i) {
        int b = bin_of(scores[i], num_bins);
        sum[b] += labels[i];
        cnt[b] += 1.0;
      }
      c.bin_value.resize(num_bins);
      for (int b = 0; b < num_bins; ++b)
        c.bin_value[b] = cnt[b] > 0.0 ? sum[b] / cnt[b] : 0.5;
      break;
    }
    case CalibratorKind::kIsotonic: {
      auto order = sorted_order(scores);
      std::vector<double> ys(order.size());
      c.iso_z.resize(order.size());
      for (std::size_t i = 0; i < order.size(); ++i) {
        c.iso_z[i] = scores[order[i]];
        ys[i] = labels[order[i]];
      }
      c.iso_level = pava(ys);
      break;
    }
    case CalibratorKind::kTemperature: {
      // one-label data has no finite maximum-likelihood solution; the fit
      // saturates and is flagged as clamped
      bool any0 = false, any1 = false;
      for (int l : labels) (l == 0 ? any0 : any1) = true;
      if (!any0 || !any1) c.clamped = true;
      double b0 = 0.0, b1 = 1.0;
      std::vector<double> t(scores.size());
      for (std::size_t i = 0; i < scores.size(); ++i)
        t[i] = logit_clipped(scores[i]);
      for (int it = 0; it < 100; ++it) {
        double g0 = 0.0, g1 = 0.0, h00 = 0.0, h01 = 0.0, h11 = 0.0;
        for (std::size_t i = 0; i < t.size(); ++i) {
          double p = sigmoid(b0 + b1 * t[i]);
          double r = labels[i] - p;
          double w = p * (1.0 - p);
          g0 += r;
          g1 += r * t[i];
          h00 += w;
          h01 += w * t[i];
          h11 += w * t[i] * t[i];
        }
        h00 += 1e-12;
        h11 += 1e-12;
        double det = h00 * h11 - h01 * h01;
        double d0 = (h11 * g0 - h01 * g1) / det;
        double d1 = (h00 * g1 - h01 * g0) / det;
        b0 += d0;
        b1 += d1;
        if (std::abs(b0) > 50.0 || std::abs(b1) > 50.0) {
          b0 = std::min(std::max(b0, -50.0), 50.0);
          b1 = std::min(std::max(b1, -50.0), 50.0);
          c.clamped = true;
        }
        if (std::abs(d0) < 1e-10 && std::abs(d1) < 1e-10) break;
      }
      c.beta0 = b0;
      c.beta1 = b1;
      break;
    }
  }
  return c;
}

BinnedEce binned_ece_estimate(const std::vector<double>& scores,
                              const std::vector<int>& labels, int num_bins,
                              double delta) {
  check_inputs(scores, labels);
  if (num_bins < 1) throw std::invalid_argument("binned_ece: num_bins >= 1");
  double n = static_cast<double>(scores.size());
  std::vector<double> diff(num_bins, 0.0);
  for (std::size_t i = 0; i < scores.size(); ++i)
    diff[bin_of(scores[i], num_bins)] += labels[i] - scores[i];
  BinnedEce out;
  for (double d : diff) out.estimate += std::abs(d);
  out.estimate /= n;
  out.radius = std::sqrt(2.0 * std::log(1.0 / delta) / n);
  out.slack = std::sqrt(static_cast<double>(num_bins) / n);
  return out;
}

double ece_discrete(const std::vector<double>& scores,
                    const std::vector<int>& labels, std::size_t max_values) {
  check_inputs(scores, labels);
  auto order = sorted_order(scores);
  double n = static_cast<double>(scores.size());
  double total = 0.0;
  std::size_t i = 0, distinct = 0;
  while (i < order.size()) {
    double v = scores[order[i]];
    double sum = 0.0, cnt = 0.0;
    while (i < order.size() && scores[order[i]] == v) {
      sum += labels[order[i]];
      cnt += 1.0;
      ++i;
    }
    if (++distinct > max_values)
      throw std::invalid_argument(
          "ece_discrete: too many distinct outputs; the plug-in ECE is only "
          "meaningful for discrete-output models - use dce_estimate");
    total += cnt / n * std::abs(sum / cnt - v);
  }
  return total;
}

DceEstimate dce_estimate(const std::vector<double>& scores,
                         const std::vector<int>& labels, int K, double delta) {
  check_inputs(scores, labels);
  if (K < 1) throw std::invalid_argument("dce_estimate: K >= 1");
  double n = static_cast<double>(scores.size());
  std::vector<double> diff(K, 0.0);
  for (std::size_t i = 0; i < scores.size(); ++i) {
    int b = bin_of(scores[i], K);
    diff[b] += labels[i] - static_cast<double>(b + 1) / K;
  }
  DceEstimate out;
  for (double d : diff) out.estimate += std::abs(d);
  out.estimate /= n;
  out.upper_confidence =
      out.estimate + 1.0 / K + std::sqrt(2.0 * std::log(1.0 / delta) / n);
  return out;
}

std::pair<double, double> venn_abers(const std::vector<double>& scores,
                                     const std::vector<int>& labels,
                                     double test_fx) {
  if (scores.size() != labels.size())
    throw std::invalid_argument("venn_abers: bad input sizes");
  auto fit_at_test = [&](int hyp_label) {
    std::vector<double> z = scores;
    std::vector<double> y(labels.begin(), labels.end());
    z.push_back(test_fx);
    y.push_back(hyp_label);
    auto order = sorted_order(z);  // test point last among ties (max index)
    std::vector<double> ys(order.size());
    std::size_t test_pos = 0;
    for (std::size_t i = 0; i < order.size(); ++i) {
      ys[i] = y[order[i]];
      if (order[i] == z.size() - 1) test_pos = i;
    }
    return pava(ys)[test_pos];
  };
  return {fit_at_test(0), fit_at_test(1)};
}

}  // namespace dfp
