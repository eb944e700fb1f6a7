#include <doctest.h>

#include <random>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include <subreg/kernels.hpp>
#include <subreg/languages.hpp>
#include <subreg/learners.hpp>

using namespace subreg;

namespace {

// force a real thread team even on a single-core host so the parallel
// paths genuinely interleave with the serial references
struct ThreadGuard {
#ifdef _OPENMP
  int prior = omp_get_max_threads();
  ThreadGuard() { omp_set_num_threads(4); }
  ~ThreadGuard() { omp_set_num_threads(prior); }
#endif
};

DenseMatrix random_matrix(std::size_t rows, std::size_t cols, std::mt19937_64& g) {
  DenseMatrix m(rows, cols);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (double& v : m.a) v = u(g);
  return m;
}

}  // namespace

TEST_SUITE("parallel") {

TEST_CASE("scores kernel matches its serial reference bit for bit") {
  ThreadGuard threads;
  std::mt19937_64 g(31);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (auto [rows, cols] : {std::pair<std::size_t, std::size_t>{1, 1},
                            {7, 3},
                            {64, 17},
                            {200, 40}}) {
    DenseMatrix x = random_matrix(rows, cols, g);
    std::vector<double> w(cols);
    for (double& v : w) v = u(g);
    double b = u(g);
    std::vector<double> par, ser;
    kernels::scores(x, w, b, par);
    kernels::scores_serial(x, w, b, ser);
    CHECK(par == ser);
  }
  DenseMatrix x = random_matrix(3, 2, g);
  std::vector<double> w(5), out;
  CHECK_THROWS_AS(kernels::scores(x, w, 0.0, out), DimensionError);
  CHECK_THROWS_AS(kernels::scores_serial(x, w, 0.0, out), DimensionError);
}

TEST_CASE("residuals kernel matches its serial reference bit for bit") {
  ThreadGuard threads;
  std::mt19937_64 g(32);
  std::uniform_real_distribution<double> u(-4.0, 4.0);
  for (std::size_t n : {1, 13, 250}) {
    std::vector<double> s(n);
    std::vector<int> y(n);
    for (std::size_t i = 0; i < n; ++i) {
      s[i] = u(g);
      y[i] = (g() & 1) ? 1 : -1;
    }
    std::vector<double> par, ser;
    kernels::residuals(y, s, par);
    kernels::residuals_serial(y, s, ser);
    CHECK(par == ser);
  }
  std::vector<double> out;
  CHECK_THROWS_AS(kernels::residuals({1, -1}, {0.5}, out), DimensionError);
}

TEST_CASE("gradient kernel matches its serial reference bit for bit") {
  ThreadGuard threads;
  std::mt19937_64 g(33);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (auto [rows, cols] : {std::pair<std::size_t, std::size_t>{1, 1},
                            {9, 5},
                            {120, 33}}) {
    DenseMatrix x = random_matrix(rows, cols, g);
    std::vector<double> r(rows), w(cols);
    for (double& v : r) v = u(g);
    for (double& v : w) v = u(g);
    std::vector<double> gw_par, gw_ser;
    double gb_par = 0.0, gb_ser = 0.0;
    kernels::grad(x, r, w, 1e-3, gw_par, gb_par);
    kernels::grad_serial(x, r, w, 1e-3, gw_ser, gb_ser);
    CHECK(gw_par == gw_ser);
    CHECK(gb_par == gb_ser);
  }
}

TEST_CASE("feature matrix matches its serial reference") {
  ThreadGuard threads;
  LanguageSpec spec = default_sl3_spec();
  PredicateSet feats = deciding_predicates(spec);
  Rng rng(44);
  std::vector<Str> xs;
  for (int i = 0; i < 100; ++i)
    xs.push_back(i % 2 == 0 ? sample_positive(spec, {5, 15}, rng)
                            : sample_negative(spec, {5, 15}, rng));
  FeatureMatrix par = feature_matrix(feats, xs);
  FeatureMatrix ser = feature_matrix_serial(feats, xs);
  CHECK(par.rows == ser.rows);
  CHECK(par.cols == ser.cols);
  CHECK(par.bits == ser.bits);
}

TEST_CASE("dataset generation matches its serial reference") {
  ThreadGuard threads;
  for (const LanguageSpec& spec : {default_sl3_spec(), default_sp2_spec()}) {
    LabeledDataset par = generate_dataset(spec, 120, 120, {5, 15}, 77);
    LabeledDataset ser = generate_dataset_serial(spec, 120, 120, {5, 15}, 77);
    REQUIRE(par.items.size() == ser.items.size());
    for (std::size_t i = 0; i < par.items.size(); ++i) {
      CHECK(par.items[i].str == ser.items[i].str);
      CHECK(par.items[i].label == ser.items[i].label);
      CHECK(par.items[i].source == ser.items[i].source);
    }
  }
}

TEST_CASE("logistic training matches its serial reference bit for bit") {
  ThreadGuard threads;
  LanguageSpec spec = default_ltt2_spec();
  LabeledDataset d = flip_labels(generate_dataset(spec, 100, 100, {5, 15}, 5), 0.1, 6);
  PredicateSet feats = deciding_predicates(spec);
  DenseMatrix x = to_dense(feature_matrix(feats, d.strings()));
  LogRegConfig cfg;
  cfg.epochs = 150;
  LinearModel par = train_logreg(x, d.labels(), cfg);
  LinearModel ser = train_logreg_serial(x, d.labels(), cfg);
  CHECK(par.weights == ser.weights);
  CHECK(par.bias == ser.bias);
}

#ifdef _OPENMP
TEST_CASE("results do not depend on the thread count") {
  int prior = omp_get_max_threads();
  LanguageSpec spec = default_sl3_spec();
  PredicateSet feats = deciding_predicates(spec);
  LogRegConfig cfg;
  cfg.epochs = 80;

  omp_set_num_threads(1);
  LabeledDataset d1 = generate_dataset(spec, 80, 80, {5, 15}, 21);
  DenseMatrix x1 = to_dense(feature_matrix(feats, d1.strings()));
  LinearModel m1 = train_logreg(x1, d1.labels(), cfg);

  omp_set_num_threads(3);
  LabeledDataset d3 = generate_dataset(spec, 80, 80, {5, 15}, 21);
  DenseMatrix x3 = to_dense(feature_matrix(feats, d3.strings()));
  LinearModel m3 = train_logreg(x3, d3.labels(), cfg);
  omp_set_num_threads(prior);

  REQUIRE(d1.items.size() == d3.items.size());
  for (std::size_t i = 0; i < d1.items.size(); ++i) CHECK(d1.items[i].str == d3.items[i].str);
  CHECK(x1.a == x3.a);
  CHECK(m1.weights == m3.weights);
  CHECK(m1.bias == m3.bias);
}
#endif

}  // TEST_SUITE
