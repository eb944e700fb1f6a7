#include "subreg/kernels.hpp"

#include <cmath>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace subreg {

DenseMatrix to_dense(const FeatureMatrix& f) {
  DenseMatrix m(f.rows, f.cols);
  for (std::size_t i = 0; i < f.bits.size(); ++i) m.a[i] = f.bits[i] ? 1.0 : 0.0;
  return m;
}

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  double e = std::exp(z);
  return e / (1.0 + e);
}

double softplus(double z) {
  if (z > 35.0) return z;
  if (z < -35.0) return std::exp(z);
  return std::log1p(std::exp(z));
}

namespace kernels {

static void check_dims(const DenseMatrix& X, std::size_t wlen) {
  if (X.cols != wlen)
    throw DimensionError("matrix has " + std::to_string(X.cols) + " columns but weight vector has " +
                         std::to_string(wlen));
}

void scores_serial(const DenseMatrix& X, const std::vector<double>& w, double b,
                   std::vector<double>& out) {
  check_dims(X, w.size());
  out.assign(X.rows, 0.0);
  for (std::size_t i = 0; i < X.rows; ++i) {
    const double* row = X.row(i);
    double s = b;
    for (std::size_t j = 0; j < X.cols; ++j) s += row[j] * w[j];
    out[i] = s;
  }
}

void scores(const DenseMatrix& X, const std::vector<double>& w, double b,
            std::vector<double>& out) {
  check_dims(X, w.size());
  out.assign(X.rows, 0.0);
#pragma omp parallel for schedule(static)
  for (long i = 0; i < static_cast<long>(X.rows); ++i) {
    const double* row = X.row(static_cast<std::size_t>(i));
    double s = b;
    for (std::size_t j = 0; j < X.cols; ++j) s += row[j] * w[j];
    out[static_cast<std::size_t>(i)] = s;
  }
}

void residuals_serial(const std::vector<int>& y, const std::vector<double>& s,
                      std::vector<double>& r) {
  if (y.size() != s.size()) throw DimensionError("labels and scores differ in length");
  r.assign(y.size(), 0.0);
  for (std::size_t i = 0; i < y.size(); ++i)
    r[i] = sigmoid(s[i]) - (y[i] > 0 ? 1.0 : 0.0);
}

void residuals(const std::vector<int>& y, const std::vector<double>& s, std::vector<double>& r) {
  if (y.size() != s.size()) throw DimensionError("labels and scores differ in length");
  r.assign(y.size(), 0.0);
#pragma omp parallel for schedule(static)
  for (long i = 0; i < static_cast<long>(y.size()); ++i)
    r[static_cast<std::size_t>(i)] =
        sigmoid(s[static_cast<std::size_t>(i)]) - (y[static_cast<std::size_t>(i)] > 0 ? 1.0 : 0.0);
}

void grad_serial(const DenseMatrix& X, const std::vector<double>& r, const std::vector<double>& w,
                 double l2, std::vector<double>& gw, double& gb) {
  check_dims(X, w.size());
  if (r.size() != X.rows) throw DimensionError("residuals and matrix differ in length");
  const double inv_n = X.rows > 0 ? 1.0 / static_cast<double>(X.rows) : 0.0;
  gw.assign(X.cols, 0.0);
  for (std::size_t j = 0; j < X.cols; ++j) {
    double acc = 0.0;
    for (std::size_t i = 0; i < X.rows; ++i) acc += X.at(i, j) * r[i];
    gw[j] = acc * inv_n + l2 * w[j];
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < X.rows; ++i) acc += r[i];
  gb = acc * inv_n;
}

void grad(const DenseMatrix& X, const std::vector<double>& r, const std::vector<double>& w,
          double l2, std::vector<double>& gw, double& gb) {
  check_dims(X, w.size());
  if (r.size() != X.rows) throw DimensionError("residuals and matrix differ in length");
  const double inv_n = X.rows > 0 ? 1.0 / static_cast<double>(X.rows) : 0.0;
  gw.assign(X.cols, 0.0);
#pragma omp parallel for schedule(static)
  for (long j = 0; j < static_cast<long>(X.cols); ++j) {
    double acc = 0.0;
    for (std::size_t i = 0; i < X.rows; ++i) acc += X.at(i, static_cast<std::size_t>(j)) * r[i];
    gw[static_cast<std::size_t>(j)] = acc * inv_n + l2 * w[static_cast<std::size_t>(j)];
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < X.rows; ++i) acc += r[i];
  gb = acc * inv_n;
}

double logistic_loss(const std::vector<int>& y, const std::vector<double>& s,
                     const std::vector<double>& w, double l2) {
  if (y.size() != s.size()) throw DimensionError("labels and scores differ in length");
  double loss = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i)
    loss += softplus(-(y[i] > 0 ? 1.0 : -1.0) * s[i]);
  if (!y.empty()) loss /= static_cast<double>(y.size());
  double reg = 0.0;
  for (double v : w) reg += v * v;
  return loss + 0.5 * l2 * reg;
}

}  // namespace kernels

}  // namespace subreg
