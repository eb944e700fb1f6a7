// Timing harness for the OpenMP kernels against their serial reference
// flavors. Every pair must also agree bit for bit, so this doubles as a
// stress check of the determinism contract at sizes the unit tests skip.
//
// Usage: subreg_bench [rows] [cols] [repeats]

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include <subreg/kernels.hpp>
#include <subreg/languages.hpp>
#include <subreg/learners.hpp>
#include <subreg/predicates.hpp>
#include <subreg/rng.hpp>

namespace {

using namespace subreg;
using Clock = std::chrono::steady_clock;

int g_failures = 0;

// Best-of-n wall time in milliseconds.
template <typename Fn>
double time_best(int repeats, Fn&& fn) {
  double best = 1e300;
  for (int i = 0; i < repeats; ++i) {
    const auto t0 = Clock::now();
    fn();
    const double ms = std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
    best = std::min(best, ms);
  }
  return best;
}

void report(const char* name, double serial_ms, double parallel_ms, bool identical) {
  std::printf("%-18s %11.3f %13.3f %8.2fx   %s\n", name, serial_ms, parallel_ms,
              serial_ms / parallel_ms, identical ? "yes" : "NO");
  if (!identical) ++g_failures;
}

}  // namespace

int main(int argc, char** argv) {
  const std::size_t rows = argc > 1 ? std::stoul(argv[1]) : 20000;
  const std::size_t cols = argc > 2 ? std::stoul(argv[2]) : 200;
  const int repeats = argc > 3 ? std::stoi(argv[3]) : 5;

  int threads = 1;
#ifdef _OPENMP
  threads = omp_get_max_threads();
#endif
  std::printf("kernel benchmark: rows=%zu cols=%zu repeats=%d threads=%d\n", rows, cols, repeats,
              threads);
  std::printf("%-18s %11s %13s %9s   %s\n", "kernel", "serial ms", "parallel ms", "speedup",
              "identical");

  // Dense inputs for the raw numeric kernels.
  Rng rng(42);
  DenseMatrix x(rows, cols);
  for (double& v : x.a) v = 2.0 * rng.real01() - 1.0;
  std::vector<double> w(cols);
  for (double& v : w) v = 2.0 * rng.real01() - 1.0;
  std::vector<int> y(rows);
  for (int& v : y) v = rng.real01() < 0.5 ? 1 : -1;
  const double b = 0.25, l2 = 1e-4;

  std::vector<double> s_par, s_ser, r_par, r_ser, gw_par, gw_ser;
  double gb_par = 0.0, gb_ser = 0.0;

  const double scores_ser = time_best(repeats, [&] { kernels::scores_serial(x, w, b, s_ser); });
  const double scores_par = time_best(repeats, [&] { kernels::scores(x, w, b, s_par); });
  report("scores", scores_ser, scores_par, s_par == s_ser);

  const double resid_ser = time_best(repeats, [&] { kernels::residuals_serial(y, s_ser, r_ser); });
  const double resid_par = time_best(repeats, [&] { kernels::residuals(y, s_par, r_par); });
  report("residuals", resid_ser, resid_par, r_par == r_ser);

  const double grad_ser =
      time_best(repeats, [&] { kernels::grad_serial(x, r_ser, w, l2, gw_ser, gb_ser); });
  const double grad_par = time_best(repeats, [&] { kernels::grad(x, r_par, w, l2, gw_par, gb_par); });
  report("grad", grad_ser, grad_par, gw_par == gw_ser && gb_par == gb_ser);

  // String-level pipelines on the default SL3 setup.
  const LanguageSpec spec = default_sl3_spec();
  const PredicateSet feats = deciding_predicates(spec);
  const LenRange len = default_len_range(spec.tag);
  const long half = static_cast<long>(std::max<std::size_t>(rows / 8, 200));

  LabeledDataset data_par, data_ser;
  const double gen_ser =
      time_best(repeats, [&] { data_ser = generate_dataset_serial(spec, half, half, len, 7); });
  const double gen_par =
      time_best(repeats, [&] { data_par = generate_dataset(spec, half, half, len, 7); });
  report("generate_dataset", gen_ser, gen_par,
         data_par.strings() == data_ser.strings() && data_par.labels() == data_ser.labels());

  FeatureMatrix f_par, f_ser;
  const std::vector<Str> xs = data_par.strings();
  const double feat_ser = time_best(repeats, [&] { f_ser = feature_matrix_serial(feats, xs); });
  const double feat_par = time_best(repeats, [&] { f_par = feature_matrix(feats, xs); });
  report("feature_matrix", feat_ser, feat_par, f_par.bits == f_ser.bits);

  LogRegConfig cfg;
  cfg.epochs = 100;
  const DenseMatrix xd = to_dense(f_par);
  const std::vector<int> yd = data_par.labels();
  LinearModel m_par, m_ser;
  const double fit_ser = time_best(repeats, [&] { m_ser = train_logreg_serial(xd, yd, cfg); });
  const double fit_par = time_best(repeats, [&] { m_par = train_logreg(xd, yd, cfg); });
  report("train_logreg", fit_ser, fit_par, m_par.weights == m_ser.weights && m_par.bias == m_ser.bias);

  if (g_failures != 0) {
    std::printf("FAILED: %d kernel pair(s) disagreed with the serial reference\n", g_failures);
    return 1;
  }
  return 0;
}
