#include "subreg/learners.hpp"

#include <algorithm>
#include <cmath>

namespace subreg {

double raw_score(const LinearModel& m, const double* x) {
  double s = m.bias;
  for (std::size_t j = 0; j < m.weights.size(); ++j) s += m.weights[j] * x[j];
  return s;
}

int predict(const LinearModel& m, const double* x) { return raw_score(m, x) > 0.0 ? 1 : -1; }

std::vector<int> predict(const LinearModel& m, const DenseMatrix& X) {
  if (X.cols != m.weights.size())
    throw DimensionError("model expects " + std::to_string(m.weights.size()) +
                         " features, matrix has " + std::to_string(X.cols));
  std::vector<int> out(X.rows);
  for (std::size_t i = 0; i < X.rows; ++i) out[i] = predict(m, X.row(i));
  return out;
}

Metrics metrics_from_confusion(const Confusion& c) {
  Metrics m;
  m.confusion = c;
  long n = c.total();
  if (n == 0) throw DimensionError("empty evaluation set");
  m.accuracy = static_cast<double>(c.tp + c.tn) / static_cast<double>(n);
  m.precision = (c.tp + c.fp) > 0 ? static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fp) : 0.0;
  m.recall = (c.tp + c.fn) > 0 ? static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn) : 0.0;
  m.f1 = (m.precision + m.recall) > 0.0
             ? 2.0 * m.precision * m.recall / (m.precision + m.recall)
             : 0.0;
  return m;
}

Metrics evaluate(const LinearModel& m, const DenseMatrix& X, const std::vector<int>& y) {
  if (X.rows != y.size()) throw DimensionError("labels and matrix differ in length");
  std::vector<int> pred = predict(m, X);
  Confusion c;
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (y[i] > 0)
      (pred[i] > 0 ? c.tp : c.fn)++;
    else
      (pred[i] > 0 ? c.fp : c.tn)++;
  }
  return metrics_from_confusion(c);
}

double normalized_margin(const LinearModel& m, const double* x, int y) {
  double norm = 0.0;
  for (double w : m.weights) norm += w * w;
  norm = std::sqrt(norm);
  if (norm == 0.0) throw ZeroWeightsError("normalized margin undefined for a zero weight vector");
  return (y > 0 ? 1.0 : -1.0) * raw_score(m, x) / norm;
}

std::vector<double> normalized_margins(const LinearModel& m, const DenseMatrix& X,
                                       const std::vector<int>& y) {
  if (X.rows != y.size()) throw DimensionError("labels and matrix differ in length");
  if (X.cols != m.weights.size())
    throw DimensionError("model expects " + std::to_string(m.weights.size()) +
                         " features, matrix has " + std::to_string(X.cols));
  std::vector<double> out(X.rows);
  for (std::size_t i = 0; i < X.rows; ++i) out[i] = normalized_margin(m, X.row(i), y[i]);
  return out;
}

double margin_quantile(std::vector<double> margins, double q) {
  if (margins.empty()) throw DimensionError("quantile of an empty margin list");
  if (!(q > 0.0 && q <= 1.0)) throw ConfigError("quantile level must lie in (0, 1]");
  std::sort(margins.begin(), margins.end());
  double rank = std::ceil(q * static_cast<double>(margins.size()));
  std::size_t idx = static_cast<std::size_t>(rank) - 1;
  if (idx >= margins.size()) idx = margins.size() - 1;
  return margins[idx];
}

PerceptronResult train_perceptron(const FeatureMatrix& X, const std::vector<int>& y,
                                  int max_epochs) {
  if (X.rows != y.size()) throw DimensionError("labels and matrix differ in length");
  if (max_epochs < 1) throw ConfigError("max_epochs must be >= 1");

  PerceptronResult res;
  res.model.weights.assign(X.cols, 0.0);
  res.model.bias = 0.0;

  for (int epoch = 0; epoch < max_epochs; ++epoch) {
    long epoch_mistakes = 0;
    for (std::size_t i = 0; i < X.rows; ++i) {
      double s = res.model.bias;
      for (std::size_t j = 0; j < X.cols; ++j)
        if (X.at(i, j)) s += res.model.weights[j];
      int pred = s > 0.0 ? 1 : -1;
      if (pred != y[i]) {
        double step = y[i] > 0 ? 1.0 : -1.0;
        for (std::size_t j = 0; j < X.cols; ++j)
          if (X.at(i, j)) res.model.weights[j] += step;
        res.model.bias += step;
        ++epoch_mistakes;
      }
    }
    res.mistakes += epoch_mistakes;
    res.epochs_run = epoch + 1;
    if (epoch_mistakes == 0) {
      res.converged = true;
      break;
    }
  }
  return res;
}

namespace {

LinearModel logreg_impl(const DenseMatrix& X, const std::vector<int>& y, const LogRegConfig& cfg,
                        std::vector<std::string> feature_names, bool parallel) {
  if (X.rows != y.size()) throw DimensionError("labels and matrix differ in length");
  if (X.rows == 0) throw DimensionError("cannot train on an empty dataset");
  if (cfg.epochs < 1) throw ConfigError("epochs must be >= 1");
  if (cfg.lr <= 0.0) throw ConfigError("learning rate must be positive");
  if (cfg.l2 < 0.0) throw ConfigError("l2 must be nonnegative");
  if (!feature_names.empty() && feature_names.size() != X.cols)
    throw DimensionError("feature name list does not match the matrix width");

  std::vector<double> w(X.cols, 0.0);
  double b = 0.0;
  std::vector<double> s, r, gw;
  double gb = 0.0;

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    if (parallel) {
      kernels::scores(X, w, b, s);
      kernels::residuals(y, s, r);
      kernels::grad(X, r, w, cfg.l2, gw, gb);
    } else {
      kernels::scores_serial(X, w, b, s);
      kernels::residuals_serial(y, s, r);
      kernels::grad_serial(X, r, w, cfg.l2, gw, gb);
    }

    double loss = kernels::logistic_loss(y, s, w, cfg.l2);
    if (!std::isfinite(loss))
      throw DivergenceError("loss became non-finite at epoch " + std::to_string(epoch));

    double gmax = std::fabs(gb);
    for (double g : gw) gmax = std::max(gmax, std::fabs(g));
    if (gmax < cfg.tol) break;

    for (std::size_t j = 0; j < w.size(); ++j) w[j] -= cfg.lr * gw[j];
    b -= cfg.lr * gb;
  }

  LinearModel m;
  m.weights = std::move(w);
  m.bias = b;
  m.feature_names = std::move(feature_names);
  return m;
}

}  // namespace

LinearModel train_logreg(const DenseMatrix& X, const std::vector<int>& y, const LogRegConfig& cfg,
                         std::vector<std::string> feature_names) {
  return logreg_impl(X, y, cfg, std::move(feature_names), true);
}

LinearModel train_logreg_serial(const DenseMatrix& X, const std::vector<int>& y,
                                const LogRegConfig& cfg,
                                std::vector<std::string> feature_names) {
  return logreg_impl(X, y, cfg, std::move(feature_names), false);
}

}  // namespace subreg
