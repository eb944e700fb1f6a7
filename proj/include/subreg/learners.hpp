#pragma once

// Linear learners over boolean features: the classic perceptron (tracking
// its mistake count) and full-batch gradient-descent logistic regression,
// plus evaluation metrics and normalized-margin statistics.

#include <string>
#include <vector>

#include "subreg/kernels.hpp"
#include "subreg/predicates.hpp"

namespace subreg {

struct LinearModel {
  std::vector<double> weights;
  double bias = 0.0;
  std::vector<std::string> feature_names;  // optional, same length as weights when set
};

double raw_score(const LinearModel& m, const double* x);
// sign of the raw score; a score of exactly zero predicts -1
int predict(const LinearModel& m, const double* x);
std::vector<int> predict(const LinearModel& m, const DenseMatrix& X);

struct Confusion {
  long tp = 0, fp = 0, fn = 0, tn = 0;
  long total() const { return tp + fp + fn + tn; }
};

struct Metrics {
  double accuracy = 0.0;
  double precision = 0.0;  // 0 when there are no positive predictions
  double recall = 0.0;     // 0 when there are no positive labels
  double f1 = 0.0;
  Confusion confusion;
};

Metrics metrics_from_confusion(const Confusion& c);
Metrics evaluate(const LinearModel& m, const DenseMatrix& X, const std::vector<int>& y);

// y (w.x + b) / |w|_2; throws ZeroWeightsError when |w| = 0
double normalized_margin(const LinearModel& m, const double* x, int y);
std::vector<double> normalized_margins(const LinearModel& m, const DenseMatrix& X,
                                       const std::vector<int>& y);

// Nearest-rank lower quantile: sort ascending and take index ceil(q N) - 1.
double margin_quantile(std::vector<double> margins, double q);

struct PerceptronResult {
  LinearModel model;
  long mistakes = 0;
  int epochs_run = 0;
  bool converged = false;  // an entire pass made no mistakes
};

PerceptronResult train_perceptron(const FeatureMatrix& X, const std::vector<int>& y,
                                  int max_epochs = 1000);

struct LogRegConfig {
  double lr = 0.5;
  int epochs = 5000;
  double tol = 1e-8;  // stop when the gradient's max-norm falls below this
  double l2 = 1e-4;   // weights only; the bias is never regularized
};

// Full-batch gradient descent from zero init. Deterministic. Throws
// DivergenceError if the loss stops being finite.
LinearModel train_logreg(const DenseMatrix& X, const std::vector<int>& y, const LogRegConfig& cfg,
                         std::vector<std::string> feature_names = {});
LinearModel train_logreg_serial(const DenseMatrix& X, const std::vector<int>& y,
                                const LogRegConfig& cfg,
                                std::vector<std::string> feature_names = {});

}  // namespace subreg
