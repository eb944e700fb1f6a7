#include "subreg/cli.hpp"

#include <filesystem>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "subreg/experiments.hpp"
#include "subreg/serialize.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

#ifndef SUBREG_DATA_DIR
#define SUBREG_DATA_DIR "data"
#endif

namespace subreg {

namespace {

namespace fs = std::filesystem;

constexpr std::uint64_t kCliFlipSalt = 0xF11Eull;

struct CommonOpts {
  std::string out = "out";
  std::uint64_t seed = 0;
  int jobs = 0;
};

void add_common(CLI::App* cmd, CommonOpts& c) {
  cmd->add_option("--out", c.out, "output directory")
      ->envname("SUBREG_OUT_DIR")
      ->capture_default_str();
  cmd->add_option("--seed", c.seed, "base RNG seed")->capture_default_str();
  cmd->add_option("--jobs", c.jobs, "cap worker threads (0 keeps the runtime default)")
      ->capture_default_str();
  cmd->set_config("--config", "", "read options from a config file");
}

void apply_common(const CommonOpts& c) {
  fs::create_directories(c.out);
#ifdef _OPENMP
  if (c.jobs > 0) omp_set_num_threads(c.jobs);
#else
  (void)c;
#endif
}

std::string out_path(const CommonOpts& c, const std::string& name) {
  return (fs::path(c.out) / name).string();
}

void write_echo(const CommonOpts& c, const std::string& subcommand, Json extra) {
  extra["subcommand"] = subcommand;
  extra["out"] = c.out;
  extra["seed"] = c.seed;
  extra["jobs"] = c.jobs;
  save_json(out_path(c, "config_echo.json"), extra);
}

LanguageSpec resolve_spec(const std::string& spec_file, const std::string& cls) {
  if (!spec_file.empty()) return language_spec_from_json(load_json(spec_file));
  auto tag = class_tag_from_string(cls);
  if (cls.empty() || !tag)
    throw ConfigError("need --spec FILE or --class {sl|sp|ltt}");
  switch (*tag) {
    case ClassTag::SL: return default_sl3_spec();
    case ClassTag::SP: return default_sp2_spec();
    case ClassTag::LTT: return default_ltt2_spec();
    default: throw ConfigError("no built-in setup for this class; pass --spec FILE");
  }
}

PredicateSet resolve_features(const std::string& features_file, const std::string& spec_file,
                              const std::string& cls) {
  if (!features_file.empty()) return predicate_set_from_json(load_json(features_file));
  return deciding_predicates(resolve_spec(spec_file, cls));
}

std::vector<double> parse_double_list(const std::string& text, const char* what) {
  std::vector<double> out;
  std::stringstream in(text);
  std::string tok;
  while (std::getline(in, tok, ',')) {
    try {
      out.push_back(std::stod(tok));
    } catch (const std::exception&) {
      throw ConfigError(std::string("cannot parse ") + what + " value: " + tok);
    }
  }
  if (out.empty()) throw ConfigError(std::string(what) + " list is empty");
  return out;
}

// json formatting gives shortest-round-trip doubles, so values reload exactly
std::string exact(double v) { return Json(v).dump(); }

struct SolverOpts {
  double lr = 0.5;
  int epochs = 600;
  double tol = 1e-8;
  double l2 = 1e-4;
};

void add_solver(CLI::App* cmd, SolverOpts& s) {
  cmd->add_option("--lr", s.lr, "gradient descent step size")->capture_default_str();
  cmd->add_option("--epochs", s.epochs, "full-batch epochs")->capture_default_str();
  cmd->add_option("--tol", s.tol, "gradient max-norm stopping tolerance")->capture_default_str();
  cmd->add_option("--l2", s.l2, "ridge penalty on the weights")->capture_default_str();
}

LogRegConfig to_config(const SolverOpts& s) { return {s.lr, s.epochs, s.tol, s.l2}; }

Json solver_echo(const SolverOpts& s) {
  return Json{{"lr", s.lr}, {"epochs", s.epochs}, {"tol", s.tol}, {"l2", s.l2}};
}

// ---- gen ----------------------------------------------------------------

struct GenOpts {
  CommonOpts common;
  std::string cls, spec_file;
  long n_pos = 1000, n_neg = 1000;
  int len_min = 0, len_max = 0;  // 0 = class default
  double noise = 0.0;
};

void run_gen(const GenOpts& o) {
  apply_common(o.common);
  LanguageSpec spec = resolve_spec(o.spec_file, o.cls);
  LenRange len = default_len_range(spec.tag);
  if (o.len_min > 0) len.lo = o.len_min;
  if (o.len_max > 0) len.hi = o.len_max;

  write_echo(o.common, "gen",
             Json{{"class", to_string(spec.tag)},
                  {"spec", language_spec_to_json(spec)},
                  {"n_pos", o.n_pos},
                  {"n_neg", o.n_neg},
                  {"len_min", len.lo},
                  {"len_max", len.hi},
                  {"noise", o.noise}});

  LabeledDataset data = generate_dataset(spec, o.n_pos, o.n_neg, len, o.common.seed);
  if (o.noise > 0.0) data = flip_labels(data, o.noise, mix_seed(o.common.seed, kCliFlipSalt));

  std::string path = out_path(o.common, "dataset.jsonl");
  save_dataset_jsonl({spec.alphabet, data}, path);
  std::cout << "wrote " << data.items.size() << " items (" << o.n_pos << " pos, " << o.n_neg
            << " neg, noise " << o.noise << ") to " << path << "\n";
}

// ---- featurize ----------------------------------------------------------

struct FeaturizeOpts {
  CommonOpts common;
  std::string dataset, features_file, spec_file, cls;
};

void run_featurize(const FeaturizeOpts& o) {
  apply_common(o.common);
  DatasetFile d = load_dataset_jsonl(o.dataset);
  PredicateSet ps = resolve_features(o.features_file, o.spec_file, o.cls);
  if (!(ps.alphabet == d.alphabet))
    throw ConfigError("dataset and predicate set use different alphabets");

  write_echo(o.common, "featurize",
             Json{{"dataset", o.dataset},
                  {"class", to_string(ps.tag)},
                  {"n_predicates", ps.size()}});

  FeatureMatrix fm = feature_matrix(ps, d.data.strings());
  std::vector<int> y = d.data.labels();

  std::ostringstream csv;
  std::vector<std::string> names = ps.feature_names();
  for (const std::string& n : names) csv << n << ',';
  csv << "label\n";
  for (std::size_t i = 0; i < fm.rows; ++i) {
    for (std::size_t j = 0; j < fm.cols; ++j) csv << int(fm.at(i, j)) << ',';
    csv << y[i] << '\n';
  }
  save_text(out_path(o.common, "features.csv"), csv.str());
  save_json(out_path(o.common, "predicates.json"), predicate_set_to_json(ps));
  std::cout << "featurized " << fm.rows << " items into " << fm.cols << " columns\n";
}

// ---- train --------------------------------------------------------------

struct TrainOpts {
  CommonOpts common;
  std::string dataset, features_file, spec_file, cls;
  std::string learner = "logreg";
  SolverOpts solver;
  int max_epochs = 1000;
};

void run_train(const TrainOpts& o) {
  apply_common(o.common);
  if (o.learner != "logreg" && o.learner != "perceptron")
    throw ConfigError("learner must be logreg or perceptron");
  DatasetFile d = load_dataset_jsonl(o.dataset);
  PredicateSet ps = resolve_features(o.features_file, o.spec_file, o.cls);
  if (!(ps.alphabet == d.alphabet))
    throw ConfigError("dataset and predicate set use different alphabets");

  write_echo(o.common, "train",
             Json{{"dataset", o.dataset},
                  {"learner", o.learner},
                  {"solver", solver_echo(o.solver)},
                  {"max_epochs", o.max_epochs},
                  {"n_predicates", ps.size()}});

  FeatureMatrix fm = feature_matrix(ps, d.data.strings());
  std::vector<int> y = d.data.labels();

  ModelFile mf;
  mf.learner = o.learner;
  mf.solver = to_config(o.solver);
  mf.dataset_fingerprint = d.data.spec_fingerprint;
  if (o.learner == "logreg") {
    mf.model = train_logreg(to_dense(fm), y, mf.solver, ps.feature_names());
  } else {
    PerceptronResult r = train_perceptron(fm, y, o.max_epochs);
    mf.model = r.model;
    mf.model.feature_names = ps.feature_names();
    std::cout << "perceptron: " << r.mistakes << " mistakes over " << r.epochs_run << " epochs"
              << (r.converged ? " (converged)" : " (cap hit)") << "\n";
  }

  save_json(out_path(o.common, "model.json"), model_to_json(mf));
  Metrics m = evaluate(mf.model, to_dense(fm), y);
  save_json(out_path(o.common, "train_metrics.json"), metrics_to_json(m));
  std::cout << "train accuracy " << m.accuracy << ", f1 " << m.f1 << "\n";
}

// ---- eval ---------------------------------------------------------------

struct EvalOpts {
  CommonOpts common;
  std::string model, dataset, features_file, spec_file, cls;
};

void run_eval(const EvalOpts& o) {
  apply_common(o.common);
  ModelFile mf = model_from_json(load_json(o.model));
  DatasetFile d = load_dataset_jsonl(o.dataset);
  PredicateSet ps = resolve_features(o.features_file, o.spec_file, o.cls);
  if (!(ps.alphabet == d.alphabet))
    throw ConfigError("dataset and predicate set use different alphabets");
  if (ps.size() != mf.model.weights.size())
    throw DimensionError("model was trained on " + std::to_string(mf.model.weights.size()) +
                         " features but the predicate set has " + std::to_string(ps.size()));

  write_echo(o.common, "eval", Json{{"model", o.model}, {"dataset", o.dataset}});

  DenseMatrix X = to_dense(feature_matrix(ps, d.data.strings()));
  std::vector<int> y = d.data.labels();
  Metrics m = evaluate(mf.model, X, y);
  std::vector<double> margins = normalized_margins(mf.model, X, y);

  save_json(out_path(o.common, "metrics.json"), metrics_to_json(m));
  std::ostringstream csv;
  csv << "index,label,margin\n";
  for (std::size_t i = 0; i < margins.size(); ++i)
    csv << i << ',' << y[i] << ',' << exact(margins[i]) << '\n';
  save_text(out_path(o.common, "margins.csv"), csv.str());
  std::cout << "accuracy " << m.accuracy << ", f1 " << m.f1 << ", q01 "
            << margin_quantile(margins, 0.01) << "\n";
}

// ---- sweeps -------------------------------------------------------------

struct SweepOpts {
  CommonOpts common;
  std::string cls = "sl";
  std::string grid;
  int trials = 0;
  long n_train = 0, n_test = 0;
  int len_min = 0, len_max = 0;
  SolverOpts solver;
  bool solver_set = false;
};

void run_sweep(const SweepOpts& o, const std::string& kind) {
  apply_common(o.common);
  auto tag = class_tag_from_string(o.cls);
  if (!tag) throw ConfigError("unknown class: " + o.cls);

  SweepConfig cfg = default_sweep(*tag, kind, o.common.seed);
  if (!o.grid.empty()) cfg.grid = parse_double_list(o.grid, "grid");
  if (o.trials > 0) cfg.trials = o.trials;
  if (o.n_train > 0) cfg.n_train = o.n_train;
  if (o.n_test > 0) cfg.n_test = o.n_test;
  if (o.len_min > 0) cfg.len.lo = o.len_min;
  if (o.len_max > 0) cfg.len.hi = o.len_max;
  if (o.solver_set) cfg.solver = to_config(o.solver);

  Json grid_echo = Json::array();
  for (double v : cfg.grid) grid_echo.push_back(v);
  write_echo(o.common, "sweep-" + kind,
             Json{{"class", to_string(*tag)},
                  {"grid", grid_echo},
                  {"trials", cfg.trials},
                  {"n_train", cfg.n_train},
                  {"n_test", cfg.n_test},
                  {"len_min", cfg.len.lo},
                  {"len_max", cfg.len.hi},
                  {"solver",
                   Json{{"lr", cfg.solver.lr},
                        {"epochs", cfg.solver.epochs},
                        {"tol", cfg.solver.tol},
                        {"l2", cfg.solver.l2}}},
                  {"config_hash", config_hash(cfg)}});

  std::vector<ResultRow> rows;
  if (kind == "size")
    rows = size_sweep(cfg);
  else if (kind == "quantile")
    rows = quantile_sweep(cfg);
  else
    rows = noise_sweep(cfg);

  std::string path = out_path(o.common, "results.csv");
  emit_csv(rows, path);
  std::cout << "wrote " << rows.size() << " rows to " << path << "\n";
}

void add_sweep(CLI::App& app, const std::string& name, const std::string& kind,
               const std::string& desc) {
  auto o = std::make_shared<SweepOpts>();
  CLI::App* cmd = app.add_subcommand(name, desc);
  add_common(cmd, o->common);
  cmd->add_option("--class", o->cls, "language setup: sl, sp or ltt")->capture_default_str();
  cmd->add_option("--grid", o->grid, "comma-separated grid values");
  cmd->add_option("--trials", o->trials, "trials per grid value");
  cmd->add_option("--n-train", o->n_train, "training items per trial");
  cmd->add_option("--n-test", o->n_test, "test items per trial");
  cmd->add_option("--len-min", o->len_min, "minimum string length");
  cmd->add_option("--len-max", o->len_max, "maximum string length");
  add_solver(cmd, o->solver);
  cmd->callback([o, kind, cmd]() {
    o->solver_set = cmd->count("--lr") || cmd->count("--epochs") || cmd->count("--tol") ||
                    cmd->count("--l2");
    run_sweep(*o, kind);
  });
}

// ---- counterexample -----------------------------------------------------

struct CounterOpts {
  CommonOpts common;
  long m = 5;
  int n_preds = 2;
  std::string preds_file;
};

void run_counterexample(const CounterOpts& o) {
  apply_common(o.common);
  PredicateSet ps = o.preds_file.empty()
                        ? random_unary_predicates(o.n_preds, o.common.seed)
                        : predicate_set_from_json(load_json(o.preds_file));

  write_echo(o.common, "counterexample",
             Json{{"m", o.m}, {"n_preds", ps.size()}, {"preds_file", o.preds_file}});

  Witness w = counterexample_demo(ps, o.m);
  save_json(out_path(o.common, "predicates.json"), predicate_set_to_json(ps));
  save_json(out_path(o.common, "witness.json"), witness_to_json(w));

  std::ostringstream tv;
  for (std::uint8_t b : w.tv) tv << int(b);
  std::cout << "length-" << o.m << " counting escapes these " << ps.size()
            << " predicates: a^" << w.len_in << " (multiple of " << o.m << ") and a^" << w.len_out
            << " (not a multiple) share truth vector " << tv.str() << ", so no decision rule over"
            << " them can split the two.\n";
  for (const std::string& name : ps.feature_names()) std::cout << "  " << name << "\n";
}

// ---- morph --------------------------------------------------------------

struct MorphOpts {
  CommonOpts common;
  std::string corpus = std::string(SUBREG_DATA_DIR) + "/toy_affix_corpus.tsv";
  std::string inventory_file;
  int neg_per_pos = 2;
  std::string ratios = "0.8,0.1,0.1";
  int min_stem = 3;
  SolverOpts solver{0.5, 2000, 1e-8, 1e-4};
};

void run_morph(const MorphOpts& o) {
  apply_common(o.common);
  morph::AffixInventory inv = o.inventory_file.empty()
                                  ? morph::AffixInventory::english_default()
                                  : inventory_from_json(load_json(o.inventory_file));
  std::vector<double> r = parse_double_list(o.ratios, "ratios");
  if (r.size() != 3) throw ConfigError("--ratios needs exactly three values");

  write_echo(o.common, "morph",
             Json{{"corpus", o.corpus},
                  {"inventory", o.inventory_file.empty() ? "builtin" : o.inventory_file},
                  {"neg_per_pos", o.neg_per_pos},
                  {"ratios", r},
                  {"min_stem", o.min_stem},
                  {"solver", solver_echo(o.solver)}});

  morph::LoadReport report;
  std::vector<morph::AffixEntry> entries =
      morph::load_affix_corpus(o.corpus, inv, &report, o.min_stem);

  morph::PipelineConfig cfg;
  cfg.neg_per_pos = o.neg_per_pos;
  cfg.ratios = {r[0], r[1], r[2]};
  cfg.seed = o.common.seed;
  cfg.min_stem = o.min_stem;
  cfg.solver = to_config(o.solver);
  morph::PipelineResult res = morph::run_pipeline(entries, inv, cfg);

  save_text(out_path(o.common, "morph_dataset.jsonl"), morph_dataset_jsonl(res.dataset));

  ModelFile mf;
  mf.model = res.model;
  mf.solver = cfg.solver;
  mf.dataset_fingerprint = "affix-corpus:" + o.corpus;
  save_json(out_path(o.common, "model.json"), model_to_json(mf));

  Json metrics{{"train", metrics_to_json(res.train)},
               {"skipped_negatives", res.dataset.skipped_negatives},
               {"corpus_rows", report.rows},
               {"annotated", report.annotated},
               {"segmented", report.segmented},
               {"dropped_no_affix", report.dropped_no_affix},
               {"malformed", report.malformed}};
  if (res.has_dev) metrics["dev"] = metrics_to_json(res.dev);
  if (res.has_test) metrics["test"] = metrics_to_json(res.test);
  save_json(out_path(o.common, "metrics.json"), metrics);

  std::ostringstream top;
  for (const auto& [name, weight] : res.top) top << name << '\t' << exact(weight) << '\n';
  save_text(out_path(o.common, "top_features.txt"), top.str());

  std::ostringstream hist;
  hist << "lo,hi,count\n";
  for (std::size_t i = 0; i < res.hist.counts.size(); ++i)
    hist << exact(res.hist.edges[i]) << ',' << exact(res.hist.edges[i + 1]) << ','
         << res.hist.counts[i] << '\n';
  save_text(out_path(o.common, "margin_hist.csv"), hist.str());

  for (const std::string& msg : report.messages) std::cerr << "corpus: " << msg << "\n";
  std::cout << "corpus: " << report.rows << " rows, " << report.annotated << " annotated, "
            << report.segmented << " segmented, " << report.dropped_no_affix
            << " dropped (no affixes), " << report.malformed << " malformed\n";
  std::cout << "items: " << res.dataset.items.size() << " ("
            << res.dataset.skipped_negatives << " negatives skipped)\n";
  std::cout << "train accuracy " << res.train.accuracy;
  if (res.has_dev) std::cout << ", dev " << res.dev.accuracy;
  if (res.has_test) std::cout << ", test " << res.test.accuracy << " (f1 " << res.test.f1 << ")";
  std::cout << "\n";
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"subregular language separability toolkit"};
  app.require_subcommand(1);

  auto gen = std::make_shared<GenOpts>();
  {
    CLI::App* cmd = app.add_subcommand("gen", "sample a labeled dataset from a language spec");
    add_common(cmd, gen->common);
    cmd->add_option("--class", gen->cls, "built-in setup: sl, sp or ltt");
    cmd->add_option("--spec", gen->spec_file, "language spec JSON file");
    cmd->add_option("--n-pos", gen->n_pos, "positive examples")->capture_default_str();
    cmd->add_option("--n-neg", gen->n_neg, "negative examples")->capture_default_str();
    cmd->add_option("--len-min", gen->len_min, "minimum string length (0 = class default)");
    cmd->add_option("--len-max", gen->len_max, "maximum string length (0 = class default)");
    cmd->add_option("--noise", gen->noise, "label flip probability")->capture_default_str();
    cmd->callback([gen]() { run_gen(*gen); });
  }

  auto feat = std::make_shared<FeaturizeOpts>();
  {
    CLI::App* cmd = app.add_subcommand("featurize", "evaluate a predicate set over a dataset");
    add_common(cmd, feat->common);
    cmd->add_option("--dataset", feat->dataset, "dataset JSONL file")->required();
    cmd->add_option("--features", feat->features_file, "predicate set JSON file");
    cmd->add_option("--spec", feat->spec_file, "language spec JSON (deciding predicates)");
    cmd->add_option("--class", feat->cls, "built-in setup: sl, sp or ltt");
    cmd->callback([feat]() { run_featurize(*feat); });
  }

  auto train = std::make_shared<TrainOpts>();
  {
    CLI::App* cmd = app.add_subcommand("train", "fit a linear model on a dataset");
    add_common(cmd, train->common);
    cmd->add_option("--dataset", train->dataset, "dataset JSONL file")->required();
    cmd->add_option("--features", train->features_file, "predicate set JSON file");
    cmd->add_option("--spec", train->spec_file, "language spec JSON (deciding predicates)");
    cmd->add_option("--class", train->cls, "built-in setup: sl, sp or ltt");
    cmd->add_option("--learner", train->learner, "logreg or perceptron")->capture_default_str();
    add_solver(cmd, train->solver);
    cmd->add_option("--max-epochs", train->max_epochs, "perceptron epoch cap")
        ->capture_default_str();
    cmd->callback([train]() { run_train(*train); });
  }

  auto eval = std::make_shared<EvalOpts>();
  {
    CLI::App* cmd = app.add_subcommand("eval", "evaluate a saved model on a dataset");
    add_common(cmd, eval->common);
    cmd->add_option("--model", eval->model, "model JSON file")->required();
    cmd->add_option("--dataset", eval->dataset, "dataset JSONL file")->required();
    cmd->add_option("--features", eval->features_file, "predicate set JSON file");
    cmd->add_option("--spec", eval->spec_file, "language spec JSON (deciding predicates)");
    cmd->add_option("--class", eval->cls, "built-in setup: sl, sp or ltt");
    cmd->callback([eval]() { run_eval(*eval); });
  }

  add_sweep(app, "sweep-noise", "noise", "accuracy across label-noise rates");
  add_sweep(app, "sweep-size", "size", "accuracy across training-set sizes");
  add_sweep(app, "sweep-quantile", "quantile", "margin quantiles across noise rates");

  auto counter = std::make_shared<CounterOpts>();
  {
    CLI::App* cmd = app.add_subcommand(
        "counterexample", "pigeonhole witness that modular counting escapes a finite predicate set");
    add_common(cmd, counter->common);
    cmd->add_option("--m", counter->m, "count multiples of m")->required();
    cmd->add_option("--n-preds", counter->n_preds, "random unary predicates to draw")
        ->capture_default_str();
    cmd->add_option("--preds", counter->preds_file, "predicate set JSON file (unary alphabet)");
    cmd->callback([counter]() { run_counterexample(*counter); });
  }

  auto morph_o = std::make_shared<MorphOpts>();
  {
    CLI::App* cmd = app.add_subcommand("morph", "affix-sequence well-formedness pipeline");
    add_common(cmd, morph_o->common);
    cmd->add_option("--corpus", morph_o->corpus, "TSV corpus (word [tab] affix annotation)")
        ->capture_default_str();
    cmd->add_option("--inventory", morph_o->inventory_file, "affix inventory JSON");
    cmd->add_option("--neg-per-pos", morph_o->neg_per_pos, "negatives per positive")
        ->capture_default_str();
    cmd->add_option("--ratios", morph_o->ratios, "train,dev,test word split")
        ->capture_default_str();
    cmd->add_option("--min-stem", morph_o->min_stem, "segmenter minimum stem length")
        ->capture_default_str();
    add_solver(cmd, morph_o->solver);
    cmd->callback([morph_o]() { run_morph(*morph_o); });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}

int run_cli(const std::vector<std::string>& args) {
  std::vector<std::string> full;
  full.push_back("subreg");
  full.insert(full.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const std::string& s : full) argv.push_back(s.c_str());
  return run_cli(static_cast<int>(argv.size()), argv.data());
}

}  // namespace subreg
