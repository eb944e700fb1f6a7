#pragma once

// Dense numeric kernels behind the learners. Each one comes in an OpenMP
// flavor and a serial reference flavor that must agree bit for bit: the
// parallel loops only ever split work so that every output scalar is still
// accumulated in one fixed serial order.

#include <cstddef>
#include <vector>

#include "subreg/errors.hpp"
#include "subreg/predicates.hpp"

namespace subreg {

// Row-major doubles.
struct DenseMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> a;

  DenseMatrix() = default;
  DenseMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c, 0.0) {}

  double at(std::size_t r, std::size_t c) const { return a[r * cols + c]; }
  double& at(std::size_t r, std::size_t c) { return a[r * cols + c]; }
  const double* row(std::size_t r) const { return a.data() + r * cols; }
};

DenseMatrix to_dense(const FeatureMatrix& f);

// numerically stable logistic helpers
double sigmoid(double z);
double softplus(double z);  // log(1 + exp(z)) without overflow

namespace kernels {

// out[i] = X.row(i) . w + b  (parallel over rows)
void scores(const DenseMatrix& X, const std::vector<double>& w, double b,
            std::vector<double>& out);
void scores_serial(const DenseMatrix& X, const std::vector<double>& w, double b,
                   std::vector<double>& out);

// r[i] = sigmoid(s[i]) - t[i] with t = (y + 1) / 2  (parallel elementwise)
void residuals(const std::vector<int>& y, const std::vector<double>& s, std::vector<double>& r);
void residuals_serial(const std::vector<int>& y, const std::vector<double>& s,
                      std::vector<double>& r);

// gw[j] = (1/N) sum_i X[i][j] r[i] + l2 w[j]; gb = (1/N) sum_i r[i].
// Parallel over columns; each column is a serial sum over rows, and gb is a
// single serial sum, so results do not depend on the thread count.
void grad(const DenseMatrix& X, const std::vector<double>& r, const std::vector<double>& w,
          double l2, std::vector<double>& gw, double& gb);
void grad_serial(const DenseMatrix& X, const std::vector<double>& r, const std::vector<double>& w,
                 double l2, std::vector<double>& gw, double& gb);

// mean softplus(-y s) + (l2/2) |w|^2, serial fixed-order sum
double logistic_loss(const std::vector<int>& y, const std::vector<double>& s,
                     const std::vector<double>& w, double l2);

}  // namespace kernels

}  // namespace subreg
