#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <subreg/experiments.hpp>

using namespace subreg;

namespace {

double mean_at(const std::vector<ResultRow>& rows, double grid_value) {
  double sum = 0.0;
  int n = 0;
  for (const ResultRow& r : rows)
    if (r.grid_value == grid_value) {
      sum += r.accuracy;
      ++n;
    }
  REQUIRE(n > 0);
  return sum / n;
}

// small, fast sweep setup used throughout this suite
SweepConfig small_sl_sweep(const std::string& grid_kind, std::uint64_t seed) {
  SweepConfig cfg = default_sweep(ClassTag::SL, grid_kind, seed);
  cfg.n_train = 300;
  cfg.n_test = 200;
  cfg.trials = 2;
  cfg.solver.epochs = 800;
  return cfg;
}

}  // namespace

TEST_SUITE("experiments") {

TEST_CASE("noise sweep: clean rate fits perfectly, noise hurts") {
  SweepConfig cfg = small_sl_sweep("noise", 42);
  cfg.grid = {0.0, 0.3};
  std::vector<ResultRow> rows = noise_sweep(cfg);
  REQUIRE(rows.size() == 4);

  for (const ResultRow& r : rows) {
    CHECK(r.cls == "SL");
    CHECK(r.grid_kind == "noise");
    CHECK(r.noise == r.grid_value);
    CHECK(r.train_size == 300);
    CHECK(r.accuracy >= 0.0);
    CHECK(r.accuracy <= 1.0);
    CHECK(r.f1 >= 0.0);
    CHECK(r.f1 <= 1.0);
    CHECK(r.config_hash == config_hash(cfg));
  }
  // rows come back sorted by (grid point, trial)
  CHECK(rows[0].grid_value == 0.0);
  CHECK(rows[0].trial == 0);
  CHECK(rows[1].trial == 1);
  CHECK(rows[2].grid_value == 0.3);

  CHECK(mean_at(rows, 0.0) >= 0.995);
  CHECK(mean_at(rows, 0.0) >= mean_at(rows, 0.3));
}

TEST_CASE("noise sweep is deterministic") {
  SweepConfig cfg = small_sl_sweep("noise", 9);
  cfg.grid = {0.1};
  cfg.trials = 1;
  std::vector<ResultRow> a = noise_sweep(cfg);
  std::vector<ResultRow> b = noise_sweep(cfg);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].accuracy == b[i].accuracy);
    CHECK(a[i].f1 == b[i].f1);
    CHECK(a[i].q_low == b[i].q_low);
    CHECK(a[i].seed == b[i].seed);
  }
}

TEST_CASE("the test split stays clean when training labels are flipped") {
  // training on fully inverted labels should tank accuracy on a clean test
  // set; if the test labels were flipped too, accuracy would stay high
  SweepConfig cfg = small_sl_sweep("noise", 3);
  cfg.grid = {1.0};
  cfg.trials = 1;
  std::vector<ResultRow> rows = noise_sweep(cfg);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].accuracy < 0.2);
}

TEST_CASE("size sweep grows accuracy with training data") {
  SweepConfig cfg = small_sl_sweep("size", 15);
  cfg.grid = {2, 60, 300};
  std::vector<ResultRow> rows = size_sweep(cfg);
  REQUIRE(rows.size() == 6);
  for (const ResultRow& r : rows) {
    CHECK(r.noise == 0.0);
    CHECK(r.train_size == static_cast<long>(r.grid_value));
  }
  CHECK(mean_at(rows, 300) >= mean_at(rows, 2));
  CHECK(mean_at(rows, 300) >= 0.995);

  SweepConfig bad = cfg;
  bad.grid = {1};
  CHECK_THROWS_AS(size_sweep(bad), ConfigError);
}

TEST_CASE("quantile sweep reports a positive low quantile for SL at zero noise") {
  SweepConfig cfg = default_sweep(ClassTag::SL, "quantile", 7);
  cfg.grid = {0.0};
  cfg.trials = 1;
  cfg.n_train = 600;
  cfg.n_test = 300;
  std::vector<ResultRow> rows = quantile_sweep(cfg);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].q_low > 0.0);
  CHECK(rows[0].accuracy >= 0.995);
}

TEST_CASE("sweep configs are validated") {
  SweepConfig cfg = small_sl_sweep("noise", 1);
  cfg.grid = {};
  CHECK_THROWS_AS(noise_sweep(cfg), ConfigError);
  cfg = small_sl_sweep("noise", 1);
  cfg.trials = 0;
  cfg.grid = {0.0};
  CHECK_THROWS_AS(noise_sweep(cfg), ConfigError);
  cfg = small_sl_sweep("noise", 1);
  cfg.grid = {0.0};
  cfg.n_test = 1;
  CHECK_THROWS_AS(noise_sweep(cfg), ConfigError);
  cfg = small_sl_sweep("noise", 1);
  cfg.grid = {1.5};
  CHECK_THROWS_AS(noise_sweep(cfg), ConfigError);
}

TEST_CASE("sampler failures carry their grid coordinates") {
  SweepConfig cfg = small_sl_sweep("noise", 1);
  cfg.spec.forbidden.clear();  // no forbidden grams: negatives cannot exist
  cfg.grid = {0.25};
  cfg.trials = 1;
  try {
    noise_sweep(cfg);
    FAIL("expected SamplerExhaustedError");
  } catch (const SamplerExhaustedError& e) {
    std::string msg = e.what();
    CHECK(msg.find("grid=0.25") != std::string::npos);
    CHECK(msg.find("trial=0") != std::string::npos);
  }
}

TEST_CASE("counterexample demo: the two-predicate worked example") {
  Alphabet a({"a"});
  PredicateSet ps;
  ps.tag = ClassTag::SL;
  ps.alphabet = a;
  Predicate p2;
  p2.kind = PredKind::Substring;
  p2.gram = Str(2, 0);  // aa
  p2.pad_width = 1;
  Predicate p4 = p2;
  p4.gram = Str(4, 0);  // aaaa
  ps.preds = {p2, p4};

  Witness w = counterexample_demo(ps, 5);
  CHECK(w.len_in == 5);
  CHECK(w.len_out == 4);
  CHECK(w.tv == TruthVector{1, 1});
  CHECK(w.scanned == 9);  // lengths 0 .. 2^2 + 5

  // definitional post-check: same truth vector, opposite membership
  CHECK(truth_vector(ps, Str(static_cast<std::size_t>(w.len_in), 0)) == w.tv);
  CHECK(truth_vector(ps, Str(static_cast<std::size_t>(w.len_out), 0)) == w.tv);
  CHECK(w.len_in % 5 == 0);
  CHECK(w.len_out % 5 != 0);

  CHECK_THROWS_AS(counterexample_demo(ps, 4), ConfigError);  // m must exceed 2^n
  Alphabet ab({"a", "b"});
  PredicateSet binary = ps;
  binary.alphabet = ab;
  CHECK_THROWS_AS(counterexample_demo(binary, 5), ConfigError);
}

TEST_CASE("pigeonhole witnesses exist for random unary predicate sets") {
  for (int n = 1; n <= 4; ++n) {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      PredicateSet ps = random_unary_predicates(n, seed);
      REQUIRE(static_cast<int>(ps.size()) == n);
      long m = (1L << n) + 1;
      Witness w = counterexample_demo(ps, m);
      CHECK(w.len_in % m == 0);
      CHECK(w.len_out % m != 0);
      CHECK(truth_vector(ps, Str(static_cast<std::size_t>(w.len_in), 0)) == w.tv);
      CHECK(truth_vector(ps, Str(static_cast<std::size_t>(w.len_out), 0)) == w.tv);
      CHECK(w.len_in <= w.scanned);
      CHECK(w.len_out <= w.scanned);
    }
  }
}

TEST_CASE("csv text has a fixed schema and is reproducible") {
  CHECK(csv_text({}) ==
        "class,grid_kind,grid_value,trial,train_size,noise,accuracy,f1,q01,seed,config_hash\n");

  SweepConfig cfg = small_sl_sweep("noise", 5);
  cfg.grid = {0.0, 0.1};
  cfg.trials = 2;
  cfg.n_train = 100;
  cfg.n_test = 60;
  std::string a = csv_text(noise_sweep(cfg));
  std::string b = csv_text(noise_sweep(cfg));
  CHECK(a == b);
  CHECK(a.back() == '\n');

  long lines = 0;
  for (char c : a)
    if (c == '\n') ++lines;
  CHECK(lines == 1 + 4);  // header + grid x trials
}

TEST_CASE("emit_csv writes the same bytes and surfaces IO failures") {
  SweepConfig cfg = small_sl_sweep("noise", 5);
  cfg.grid = {0.0};
  cfg.trials = 1;
  cfg.n_train = 100;
  cfg.n_test = 60;
  std::vector<ResultRow> rows = noise_sweep(cfg);

  std::string path = "test_emit_rows.csv";
  emit_csv(rows, path);
  std::ifstream in(path, std::ios::binary);
  std::stringstream buf;
  buf << in.rdbuf();
  CHECK(buf.str() == csv_text(rows));
  std::remove(path.c_str());

  CHECK_THROWS_AS(emit_csv(rows, "no-such-dir/rows.csv"), IoError);
}

TEST_CASE("default grids and sweep wiring") {
  CHECK(default_noise_grid() == std::vector<double>{0.0, 0.05, 0.1, 0.2, 0.3});
  CHECK(default_size_grid() == std::vector<double>{50, 100, 200, 500, 1000, 2000});

  SweepConfig sl = default_sweep(ClassTag::SL, "noise", 1);
  CHECK(sl.spec.fingerprint() == default_sl3_spec().fingerprint());
  CHECK(sl.features.size() == 109);
  CHECK(sl.n_train == 2000);
  CHECK(sl.n_test == 1000);
  CHECK(sl.trials == 5);

  SweepConfig sz = default_sweep(ClassTag::LTT, "size", 1);
  CHECK(sz.grid == default_size_grid());
  CHECK(sz.features.size() == 40);  // full deciding set for accuracy sweeps

  SweepConfig q = default_sweep(ClassTag::LTT, "quantile", 1);
  CHECK(q.grid == default_noise_grid());
  CHECK(q.features.size() == 20);  // presence features for the margin probe

  CHECK_THROWS_AS(default_sweep(ClassTag::TSL, "noise", 1), ConfigError);
}

TEST_CASE("config hash tracks the solver settings") {
  SweepConfig a = default_sweep(ClassTag::SL, "noise", 1);
  SweepConfig b = a;
  b.solver.lr = 0.25;
  CHECK(config_hash(a) != config_hash(b));
  CHECK(config_hash(a).size() == 16);
  CHECK(config_hash(a) == config_hash(a));
}

}  // TEST_SUITE
