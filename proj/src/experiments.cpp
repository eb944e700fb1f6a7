#include "subreg/experiments.hpp"

#include <algorithm>
#include <cstdio>
#include <exception>
#include <fstream>
#include <set>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace subreg {

namespace {

constexpr std::uint64_t kCellSalt = 0x9E1ECEull;
constexpr std::uint64_t kTrainSalt = 0x7EA1ull;
constexpr std::uint64_t kTestSalt = 0x7E57ull;
constexpr std::uint64_t kFlipSalt = 0xF1150ull;

std::string fmt_g6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string fmt_exact(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string cell_tag(double grid_value, int trial) {
  return " [grid=" + fmt_g6(grid_value) + " trial=" + std::to_string(trial) + "]";
}

// rethrow the same error type with the grid coordinates appended
template <typename E>
[[noreturn]] void raise_in_cell(const E& e, double grid_value, int trial) {
  throw E(e.what() + cell_tag(grid_value, trial));
}

ResultRow run_cell(const SweepConfig& cfg, const std::string& hash, double grid_value, int trial,
                   bool size_grid) {
  const std::uint64_t cell_seed =
      cfg.base_seed ^ mix_seed(kCellSalt, double_bits(grid_value), static_cast<std::uint64_t>(trial));

  long n_train = cfg.n_train;
  double noise = 0.0;
  std::uint64_t test_seed = mix_seed(cell_seed, kTestSalt);
  if (size_grid) {
    n_train = static_cast<long>(grid_value);
    if (n_train < 2) throw ConfigError("train size grid values must be >= 2" + cell_tag(grid_value, trial));
    // one clean test set per trial, shared by every size on the grid
    test_seed = mix_seed(cfg.base_seed ^ mix_seed(kCellSalt, 0, static_cast<std::uint64_t>(trial)),
                         kTestSalt);
  } else {
    noise = grid_value;
  }

  LinearModel model;
  Metrics m;
  double q = 0.0;
  try {
    LabeledDataset train = generate_dataset(cfg.spec, n_train / 2, n_train - n_train / 2, cfg.len,
                                            mix_seed(cell_seed, kTrainSalt));
    LabeledDataset test = generate_dataset(cfg.spec, cfg.n_test / 2, cfg.n_test - cfg.n_test / 2,
                                           cfg.len, test_seed);
    if (noise > 0.0) train = flip_labels(train, noise, mix_seed(cell_seed, kFlipSalt));

    DenseMatrix x_train = to_dense(feature_matrix(cfg.features, train.strings()));
    DenseMatrix x_test = to_dense(feature_matrix(cfg.features, test.strings()));

    model = train_logreg(x_train, train.labels(), cfg.solver);
    m = evaluate(model, x_test, test.labels());
    q = margin_quantile(normalized_margins(model, x_test, test.labels()), cfg.quantile);
  } catch (const SamplerExhaustedError& e) {
    raise_in_cell(e, grid_value, trial);
  } catch (const DivergenceError& e) {
    raise_in_cell(e, grid_value, trial);
  } catch (const std::runtime_error& e) {
    throw Error(e.what() + cell_tag(grid_value, trial));
  }

  ResultRow row;
  row.cls = to_string(cfg.spec.tag);
  row.grid_kind = cfg.grid_kind;
  row.grid_value = grid_value;
  row.trial = trial;
  row.train_size = n_train;
  row.noise = noise;
  row.accuracy = m.accuracy;
  row.f1 = m.f1;
  row.q_low = q;
  row.seed = cell_seed;
  row.config_hash = hash;
  return row;
}

std::vector<ResultRow> sweep_impl(const SweepConfig& cfg, bool size_grid) {
  validate(cfg.spec);
  if (cfg.grid.empty()) throw ConfigError("sweep grid is empty");
  if (cfg.trials < 1) throw ConfigError("trials must be >= 1");
  if (cfg.n_test < 2) throw ConfigError("n_test must be >= 2");
  if (!size_grid && cfg.n_train < 2) throw ConfigError("n_train must be >= 2");
  if (!size_grid)
    for (double v : cfg.grid)
      if (!(v >= 0.0 && v <= 1.0)) throw ConfigError("noise grid values must lie in [0, 1]");

  const std::string hash = config_hash(cfg);
  const long cells = static_cast<long>(cfg.grid.size()) * cfg.trials;
  std::vector<ResultRow> rows(static_cast<std::size_t>(cells));
  std::exception_ptr first_error = nullptr;

  // cells are independent; row order is fixed by index, not by schedule
#pragma omp parallel for schedule(dynamic)
  for (long c = 0; c < cells; ++c) {
    try {
      long gi = c / cfg.trials;
      int trial = static_cast<int>(c % cfg.trials);
      rows[static_cast<std::size_t>(c)] =
          run_cell(cfg, hash, cfg.grid[static_cast<std::size_t>(gi)], trial, size_grid);
    } catch (...) {
#pragma omp critical
      if (!first_error) first_error = std::current_exception();
    }
  }
  if (first_error) std::rethrow_exception(first_error);
  return rows;
}

}  // namespace

std::vector<ResultRow> noise_sweep(const SweepConfig& cfg) { return sweep_impl(cfg, false); }

std::vector<ResultRow> size_sweep(const SweepConfig& cfg) { return sweep_impl(cfg, true); }

std::vector<ResultRow> quantile_sweep(const SweepConfig& cfg) { return sweep_impl(cfg, false); }

Witness counterexample_demo(const PredicateSet& ps, long m) {
  if (ps.alphabet.size() != 1)
    throw ConfigError("counterexample demo needs a unary alphabet");
  const int n = static_cast<int>(ps.size());
  if (n < 1 || n > kMintermCap)
    throw ConfigError("predicate count must lie in 1.." + std::to_string(kMintermCap));
  const long cells = 1L << n;
  if (m <= cells)
    throw ConfigError("m must exceed 2^n = " + std::to_string(cells) +
                      " for the pigeonhole argument");

  const long bound = cells + m;
  std::vector<std::uint32_t> tv_index(static_cast<std::size_t>(bound) + 1);
  std::vector<TruthVector> tvs(static_cast<std::size_t>(bound) + 1);
  Str x;
  for (long len = 0; len <= bound; ++len) {
    if (len > 0) x.push_back(0);
    tvs[static_cast<std::size_t>(len)] = truth_vector(ps, x);
    tv_index[static_cast<std::size_t>(len)] = minterm_index(tvs[static_cast<std::size_t>(len)]);
  }

  auto member = [m](long len) { return len % m == 0; };

  // prefer the first member length that collides with an earlier non-member
  for (long j = 0; j <= bound; ++j) {
    if (!member(j)) continue;
    for (long i = 0; i < j; ++i) {
      if (member(i)) continue;
      if (tv_index[static_cast<std::size_t>(i)] == tv_index[static_cast<std::size_t>(j)])
        return {j, i, tvs[static_cast<std::size_t>(j)], bound};
    }
  }
  // fall back to any opposite-membership collision
  for (long j = 0; j <= bound; ++j)
    for (long i = 0; i < j; ++i)
      if (member(i) != member(j) &&
          tv_index[static_cast<std::size_t>(i)] == tv_index[static_cast<std::size_t>(j)]) {
        long in = member(i) ? i : j;
        long out = member(i) ? j : i;
        return {in, out, tvs[static_cast<std::size_t>(in)], bound};
      }
  throw Error("no witness within the scan bound; some predicate changes past length 2^n");
}

PredicateSet random_unary_predicates(int n, std::uint64_t seed) {
  if (n < 1 || n > kMintermCap)
    throw ConfigError("predicate count must lie in 1.." + std::to_string(kMintermCap));
  const long cells = 1L << n;

  Alphabet a({"a"});
  Rng rng(mix_seed(seed, static_cast<std::uint64_t>(n), 0xC0DEull));
  std::set<std::pair<int, std::pair<long, int>>> taken;  // (kind, (len, threshold))
  PredicateSet set;
  set.tag = ClassTag::SL;
  set.alphabet = a;

  int guard = 0;
  while (static_cast<int>(set.preds.size()) < n) {
    if (++guard > 10000) throw Error("could not draw enough distinct unary predicates");
    int kind = static_cast<int>(rng.below(3));
    long r = 1 + static_cast<long>(rng.below(static_cast<std::uint64_t>(std::min(cells, 6L))));
    Predicate p;
    p.pad_width = 1;
    p.gram.assign(static_cast<std::size_t>(r), 0);
    int t = 1;
    if (kind == 0) {
      p.kind = PredKind::Substring;
    } else if (kind == 1) {
      p.kind = PredKind::Subsequence;
    } else {
      p.kind = PredKind::ThresholdCount;
      // keep the flip length r + t - 1 within 2^n
      long t_max = std::min(cells - r + 1, 4L);
      if (t_max < 1) continue;
      t = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(t_max)));
      p.threshold = t;
    }
    if (!taken.insert({kind, {r, t}}).second) continue;
    set.preds.push_back(p);
  }
  std::sort(set.preds.begin(), set.preds.end(), Predicate::order_less);
  set.params.k = static_cast<int>(std::min(cells, 6L));
  return set;
}

std::string csv_text(const std::vector<ResultRow>& rows) {
  std::ostringstream out;
  out << "class,grid_kind,grid_value,trial,train_size,noise,accuracy,f1,q01,seed,config_hash\n";
  for (const ResultRow& r : rows) {
    out << r.cls << ',' << r.grid_kind << ',' << fmt_g6(r.grid_value) << ',' << r.trial << ','
        << r.train_size << ',' << fmt_g6(r.noise) << ',' << fmt_g6(r.accuracy) << ','
        << fmt_g6(r.f1) << ',' << fmt_g6(r.q_low) << ',' << r.seed << ',' << r.config_hash
        << '\n';
  }
  return out.str();
}

void emit_csv(const std::vector<ResultRow>& rows, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path);
  out << csv_text(rows);
  out.flush();
  if (!out) throw IoError("write failed: " + path);
}

std::string config_hash(const SweepConfig& cfg) {
  std::ostringstream s;
  s << cfg.spec.fingerprint() << '|' << to_string(cfg.features.tag) << ':' << cfg.features.size()
    << '|' << cfg.grid_kind << '|';
  for (double v : cfg.grid) s << fmt_exact(v) << ';';
  s << '|' << cfg.n_train << '/' << cfg.n_test << '|' << cfg.trials << '|' << cfg.base_seed << '|'
    << cfg.len.lo << '-' << cfg.len.hi << '|' << fmt_exact(cfg.solver.lr) << ','
    << cfg.solver.epochs << ',' << fmt_exact(cfg.solver.tol) << ',' << fmt_exact(cfg.solver.l2)
    << '|' << fmt_exact(cfg.quantile);
  char buf[32];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(fnv1a(s.str())));
  return buf;
}

std::vector<double> default_noise_grid() { return {0.0, 0.05, 0.1, 0.2, 0.3}; }

std::vector<double> default_size_grid() { return {50, 100, 200, 500, 1000, 2000}; }

SweepConfig default_sweep(ClassTag cls, const std::string& grid_kind, std::uint64_t base_seed) {
  SweepConfig cfg;
  switch (cls) {
    case ClassTag::SL: cfg.spec = default_sl3_spec(); break;
    case ClassTag::SP: cfg.spec = default_sp2_spec(); break;
    case ClassTag::LTT: cfg.spec = default_ltt2_spec(); break;
    default:
      throw ConfigError(std::string("no default sweep setup for class ") + to_string(cls));
  }
  // The margin probe runs on presence features (one threshold per gram); the
  // accuracy sweeps require the full deciding set.
  cfg.features =
      grid_kind == "quantile" ? presence_predicates(cfg.spec) : deciding_predicates(cfg.spec);
  cfg.len = default_len_range(cls);
  cfg.grid_kind = grid_kind == "quantile" ? "noise" : grid_kind;
  cfg.grid = grid_kind == "size" ? default_size_grid() : default_noise_grid();
  cfg.base_seed = base_seed;
  cfg.solver.epochs = 600;
  return cfg;
}

}  // namespace subreg
