#include "dfp/predictor.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "dfp/quantile.hpp"

namespace dfp {

struct Predictor::Impl {
  PredictorSpec spec;
  // linear kinds
  Eigen::VectorXd coef;  // [intercept, slope_1..slope_d]
  // knn
  Dataset train;
  // hist kinds (1-d x)
  double x_lo = 0.0, x_hi = 1.0;
  double y_lo = 0.0, y_hi = 1.0;
  std::vector<std::vector<double>> bin_y;        // sorted y per x bin
  std::vector<std::vector<double>> bin_counts;   // per bin, per label
  std::vector<std::vector<double>> density;      // [x bin][y bin]
};

namespace {

int bin_index(double v, double lo, double hi, int bins) {
  if (bins <= 0) throw std::invalid_argument("predictor: bins must be >= 1");
  if (hi <= lo) return 0;
  double t = (v - lo) / (hi - lo);
  int b = static_cast<int>(std::floor(t * bins));
  if (b < 0) b = 0;
  if (b >= bins) b = bins - 1;
  return b;
}

Eigen::MatrixXd design(const Dataset& d) {
  Eigen::MatrixXd X(d.n(), d.dim() + 1);
  for (std::size_t i = 0; i < d.n(); ++i) {
    X(i, 0) = 1.0;
    for (std::size_t j = 0; j < d.dim(); ++j) X(i, j + 1) = d.x[i][j];
  }
  return X;
}

}  // namespace

Predictor Predictor::fit(const PredictorSpec& spec, const Dataset& train) {
  if (train.n() == 0) throw std::invalid_argument("Predictor: empty training set");
  train.validate();
  auto impl = std::make_shared<Impl>();
  impl->spec = spec;
  switch (spec.kind) {
    case PredictorKind::kLeastSquares: {
      Eigen::MatrixXd X = design(train);
      Eigen::Map<const Eigen::VectorXd> y(train.y.data(), train.n());
      Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
      qr.setThreshold(1e-10);
      if (qr.rank() < X.cols())
        throw std::runtime_error("least_squares: rank-deficient design");
      impl->coef = qr.solve(y);
      break;
    }
    case PredictorKind::kRidge: {
      if (spec.ridge_lambda < 0.0)
        throw std::invalid_argument("ridge: lambda must be >= 0");
      Eigen::MatrixXd X = design(train);
      Eigen::Map<const Eigen::VectorXd> y(train.y.data(), train.n());
      Eigen::MatrixXd A = X.transpose() * X;
      for (int j = 1; j < A.cols(); ++j) A(j, j) += spec.ridge_lambda;
      impl->coef = A.ldlt().solve(X.transpose() * y);
      break;
    }
    case PredictorKind::kKnn: {
      if (spec.knn_k < 1 || static_cast<std::size_t>(spec.knn_k) > train.n())
        throw std::invalid_argument("knn: k out of range");
      impl->train = train;
      break;
    }
    case PredictorKind::kHistQuantile:
    case PredictorKind::kHistClassProb:
    case PredictorKind::kHistDensity: {
      if (train.dim() != 1)
        throw std::invalid_argument("hist predictors require 1-d features");
      double lo = train.x[0][0], hi = train.x[0][0];
      for (const auto& xi : train.x) {
        lo = std::min(lo, xi[0]);
        hi = std::max(hi, xi[0]);
      }
      impl->x_lo = lo;
      impl->x_hi = hi;
      if (spec.kind == PredictorKind::kHistQuantile) {
        impl->bin_y.assign(spec.bins, {});
        for (std::size_t i = 0; i < train.n(); ++i)
          impl->bin_y[bin_index(train.x[i][0], lo, hi, spec.bins)].push_back(
              train.y[i]);
        for (auto& b : impl->bin_y) std::sort(b.begin(), b.end());
      } else if (spec.kind == PredictorKind::kHistClassProb) {
        if (spec.num_labels < 2)
          throw std::invalid_argument("hist_classprob: need >= 2 labels");
        impl->bin_counts.assign(spec.bins,
                                std::vector<double>(spec.num_labels, 0.0));
        for (std::size_t i = 0; i < train.n(); ++i) {
          int lab = static_cast<int>(train.y[i]);
          if (lab < 0 || lab >= spec.num_labels)
            throw std::invalid_argument("hist_classprob: label out of range");
          impl->bin_counts[bin_index(train.x[i][0], lo, hi, spec.bins)][lab] +=
              1.0;
        }
      } else {
        double ylo = train.y[0], yhi = train.y[0];
        for (double v : train.y) {
          ylo = std::min(ylo, v);
          yhi = std::max(yhi, v);
        }
        if (yhi <= ylo) yhi = ylo + 1.0;
        impl->y_lo = ylo;
        impl->y_hi = yhi;
        impl->density.assign(spec.bins, std::vector<double>(spec.bins_y, 0.0));
        std::vector<double> xcount(spec.bins, 0.0);
        for (std::size_t i = 0; i < train.n(); ++i) {
          int bx = bin_index(train.x[i][0], lo, hi, spec.bins);
          int by = bin_index(train.y[i], ylo, yhi, spec.bins_y);
          impl->density[bx][by] += 1.0;
          xcount[bx] += 1.0;
        }
        double ywidth = (yhi - ylo) / spec.bins_y;
        for (int bx = 0; bx < spec.bins; ++bx) {
          for (int by = 0; by < spec.bins_y; ++by) {
            if (xcount[bx] > 0.0)
              impl->density[bx][by] /= xcount[bx] * ywidth;
            else
              impl->density[bx][by] = 1.0 / (yhi - ylo);  // uniform default
          }
        }
      }
      break;
    }
  }
  Predictor p;
  p.impl_ = std::move(impl);
  return p;
}

double Predictor::predict(const std::vector<double>& x) const {
  const auto& im = *impl_;
  switch (im.spec.kind) {
    case PredictorKind::kLeastSquares:
    case PredictorKind::kRidge: {
      if (x.size() + 1 != static_cast<std::size_t>(im.coef.size()))
        throw std::invalid_argument("predict: dimension mismatch");
      double v = im.coef(0);
      for (std::size_t j = 0; j < x.size(); ++j) v += im.coef(j + 1) * x[j];
      return v;
    }
    case PredictorKind::kKnn: {
      const Dataset& t = im.train;
      std::vector<std::size_t> idx(t.n());
      for (std::size_t i = 0; i < t.n(); ++i) idx[i] = i;
      std::vector<double> dist(t.n());
      for (std::size_t i = 0; i < t.n(); ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < x.size(); ++j) {
          double d = t.x[i][j] - x[j];
          s += d * d;
        }
        dist[i] = s;
      }
      // distance ties broken by lowest original row index
      std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        if (dist[a] != dist[b]) return dist[a] < dist[b];
        return a < b;
      });
      double s = 0.0;
      for (int i = 0; i < im.spec.knn_k; ++i) s += t.y[idx[i]];
      return s / im.spec.knn_k;
    }
    default:
      throw std::logic_error("predict: not a point predictor");
  }
}

double Predictor::quantile(const std::vector<double>& x, double beta) const {
  const auto& im = *impl_;
  if (im.spec.kind != PredictorKind::kHistQuantile)
    throw std::logic_error("quantile: not a hist_quantile predictor");
  const auto& b =
      im.bin_y[bin_index(x.at(0), im.x_lo, im.x_hi, im.spec.bins)];
  if (b.empty()) {
    // empty bin: fall back to the pooled sample
    std::vector<double> all;
    for (const auto& bb : im.bin_y) all.insert(all.end(), bb.begin(), bb.end());
    return FiniteSample(all).quantile(beta);
  }
  return FiniteSample(b).quantile(beta);
}

double Predictor::class_prob(const std::vector<double>& x, int label) const {
  const auto& im = *impl_;
  if (im.spec.kind != PredictorKind::kHistClassProb)
    throw std::logic_error("class_prob: not a hist_classprob predictor");
  if (label < 0 || label >= im.spec.num_labels)
    throw std::invalid_argument("class_prob: label out of range");
  const auto& c =
      im.bin_counts[bin_index(x.at(0), im.x_lo, im.x_hi, im.spec.bins)];
  double total = 0.0;
  for (double v : c) total += v;
  if (total == 0.0) return 1.0 / im.spec.num_labels;
  return c[label] / total;
}

int Predictor::num_labels() const { return impl_->spec.num_labels; }

double Predictor::density(const std::vector<double>& x, double y) const {
  const auto& im = *impl_;
  if (im.spec.kind != PredictorKind::kHistDensity)
    throw std::logic_error("density: not a hist_density predictor");
  int bx = bin_index(x.at(0), im.x_lo, im.x_hi, im.spec.bins);
  int by = bin_index(y, im.y_lo, im.y_hi, im.spec.bins_y);
  return im.density[bx][by];
}

PredictorKind Predictor::kind() const { return impl_->spec.kind; }

}  // namespace dfp
