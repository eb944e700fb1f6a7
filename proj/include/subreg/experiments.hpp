#pragma once

// Synthetic experiment drivers: noise and sample-size sweeps over the
// default language setups, margin-quantile reporting, the modular-counting
// counterexample demo, and CSV emission for all of them.

#include <cstdint>
#include <string>
#include <vector>

#include "subreg/languages.hpp"
#include "subreg/learners.hpp"
#include "subreg/minterm.hpp"

namespace subreg {

struct SweepConfig {
  LanguageSpec spec;
  PredicateSet features;
  std::string grid_kind = "noise";  // "noise" or "size"
  std::vector<double> grid;
  long n_train = 2000;
  long n_test = 1000;
  int trials = 5;
  std::uint64_t base_seed = 1;
  LenRange len;
  LogRegConfig solver;
  double quantile = 0.01;
};

struct ResultRow {
  std::string cls;
  std::string grid_kind;
  double grid_value = 0.0;
  int trial = 0;
  long train_size = 0;
  double noise = 0.0;
  double accuracy = 0.0;
  double f1 = 0.0;
  double q_low = 0.0;  // configured lower margin quantile on the clean test set
  std::uint64_t seed = 0;
  std::string config_hash;
};

// Train at each noise rate in the grid (labels flipped on the training split
// only; the test split stays clean), `trials` times per rate.
std::vector<ResultRow> noise_sweep(const SweepConfig& cfg);

// Train at each training-set size in the grid on clean data; each trial has
// one fixed test set shared across sizes.
std::vector<ResultRow> size_sweep(const SweepConfig& cfg);

// Noise sweep at the default corpus scale, reporting the margin quantile.
std::vector<ResultRow> quantile_sweep(const SweepConfig& cfg);

// Witness for the non-separability of counting modulo m: two lengths with
// identical truth vectors but opposite membership in {a^km}.
struct Witness {
  long len_in = 0;       // member length (multiple of m when one exists)
  long len_out = 0;      // non-member length
  TruthVector tv;        // shared truth vector
  long scanned = 0;      // lengths 0..scanned were examined
};

// Requires a unary alphabet and m > 2^|P|. Scans lengths 0..2^|P|+m.
Witness counterexample_demo(const PredicateSet& ps, long m);

// Unary predicate set whose truth vectors all stabilize by length 2^n, so
// the pigeonhole witness always lies inside the demo's scan bound.
PredicateSet random_unary_predicates(int n, std::uint64_t seed);

void emit_csv(const std::vector<ResultRow>& rows, const std::string& path);
std::string csv_text(const std::vector<ResultRow>& rows);

std::string config_hash(const SweepConfig& cfg);

std::vector<double> default_noise_grid();  // 0, 0.05, 0.1, 0.2, 0.3
std::vector<double> default_size_grid();   // 50 ... 2000
SweepConfig default_sweep(ClassTag cls, const std::string& grid_kind, std::uint64_t base_seed);

}  // namespace subreg
