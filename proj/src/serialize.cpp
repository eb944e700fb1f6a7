#include "subreg/serialize.hpp"

#include <fstream>
#include <sstream>

namespace subreg {

namespace {

PredKind kind_from_string(const std::string& s) {
  if (s == "substr") return PredKind::Substring;
  if (s == "subseq") return PredKind::Subsequence;
  if (s == "prefix") return PredKind::Prefix;
  if (s == "suffix") return PredKind::Suffix;
  if (s == "count") return PredKind::ThresholdCount;
  if (s == "tier-substr") return PredKind::TierSubstring;
  throw ConfigError("unknown predicate kind: " + s);
}

std::vector<std::string> tier_tokens(const Tier& t, const Alphabet& a) {
  std::vector<std::string> toks;
  for (Sym s : t.members()) toks.push_back(a.token(s));
  return toks;
}

}  // namespace

Json alphabet_to_json(const Alphabet& a) {
  return Json{{"symbols", a.tokens()}, {"boundary", a.boundary_token()}};
}

Alphabet alphabet_from_json(const Json& j) {
  return Alphabet(j.at("symbols").get<std::vector<std::string>>(),
                  j.value("boundary", std::string("#")));
}

Json predicate_to_json(const Predicate& p, const Alphabet& a) {
  Json j{{"kind", to_string(p.kind)}, {"gram", a.format(p.gram)}, {"pad_width", p.pad_width}};
  if (p.kind == PredKind::ThresholdCount) j["threshold"] = p.threshold;
  if (p.kind == PredKind::TierSubstring) j["tier"] = tier_tokens(p.tier, a);
  return j;
}

Predicate predicate_from_json(const Json& j, const Alphabet& a) {
  Predicate p;
  p.kind = kind_from_string(j.at("kind").get<std::string>());
  p.gram = a.parse(j.at("gram").get<std::string>());
  p.pad_width = j.value("pad_width", 1);
  p.threshold = j.value("threshold", 1);
  if (j.contains("tier")) p.tier = Tier(a, j.at("tier").get<std::vector<std::string>>());
  return p;
}

Json predicate_set_to_json(const PredicateSet& ps) {
  Json preds = Json::array();
  for (const Predicate& p : ps.preds) preds.push_back(predicate_to_json(p, ps.alphabet));
  Json params{{"k", ps.params.k},
              {"tau", ps.params.tau},
              {"all_tiers", ps.params.all_tiers},
              {"ltt_edge_indicators", ps.params.ltt_edge_indicators}};
  if (!ps.params.tiers.empty()) params["tiers"] = ps.params.tiers;
  if (!ps.params.tau_per_gram.empty()) {
    Json overrides = Json::object();
    for (const auto& [g, t] : ps.params.tau_per_gram) overrides[ps.alphabet.format(g)] = t;
    params["tau_per_gram"] = overrides;
  }
  return Json{{"class", to_string(ps.tag)},
              {"alphabet", alphabet_to_json(ps.alphabet)},
              {"params", params},
              {"predicates", preds}};
}

PredicateSet predicate_set_from_json(const Json& j) {
  PredicateSet ps;
  auto tag = class_tag_from_string(j.at("class").get<std::string>());
  if (!tag) throw ConfigError("unknown class tag: " + j.at("class").get<std::string>());
  ps.tag = *tag;
  ps.alphabet = alphabet_from_json(j.at("alphabet"));
  if (j.contains("params")) {
    const Json& p = j.at("params");
    ps.params.k = p.value("k", 2);
    ps.params.tau = p.value("tau", 1);
    ps.params.all_tiers = p.value("all_tiers", false);
    ps.params.ltt_edge_indicators = p.value("ltt_edge_indicators", false);
    if (p.contains("tiers"))
      ps.params.tiers = p.at("tiers").get<std::vector<std::vector<std::string>>>();
    if (p.contains("tau_per_gram"))
      for (auto it = p.at("tau_per_gram").begin(); it != p.at("tau_per_gram").end(); ++it)
        ps.params.tau_per_gram[ps.alphabet.parse(it.key())] = it.value().get<int>();
  }
  for (const Json& pj : j.at("predicates"))
    ps.preds.push_back(predicate_from_json(pj, ps.alphabet));
  return ps;
}

Json language_spec_to_json(const LanguageSpec& spec) {
  Json j{{"class", to_string(spec.tag)},
         {"alphabet", alphabet_to_json(spec.alphabet)},
         {"k", spec.k}};
  if (!spec.forbidden.empty()) {
    Json f = Json::array();
    for (const Str& g : spec.forbidden) f.push_back(spec.alphabet.format(g));
    j["forbidden"] = f;
  }
  if (!spec.tier.empty()) j["tier"] = tier_tokens(spec.tier, spec.alphabet);
  if (!spec.ltt_constraints.empty()) {
    Json cs = Json::array();
    for (const LttConstraint& c : spec.ltt_constraints)
      cs.push_back(Json{{"gram", spec.alphabet.format(c.gram)},
                        {"op", c.at_least ? ">=" : "<="},
                        {"bound", c.bound}});
    j["constraints"] = cs;
  }
  if (!spec.lt_literals.empty()) {
    Json ls = Json::array();
    for (const LtLiteral& l : spec.lt_literals)
      ls.push_back(Json{{"pred", predicate_to_json(l.pred, spec.alphabet)}, {"value", l.value}});
    j["literals"] = ls;
  }
  return j;
}

LanguageSpec language_spec_from_json(const Json& j) {
  LanguageSpec spec;
  auto tag = class_tag_from_string(j.at("class").get<std::string>());
  if (!tag) throw ConfigError("unknown class tag: " + j.at("class").get<std::string>());
  spec.tag = *tag;
  spec.alphabet = alphabet_from_json(j.at("alphabet"));
  spec.k = j.at("k").get<int>();
  if (j.contains("forbidden"))
    for (const Json& g : j.at("forbidden"))
      spec.forbidden.push_back(spec.alphabet.parse(g.get<std::string>()));
  if (j.contains("tier"))
    spec.tier = Tier(spec.alphabet, j.at("tier").get<std::vector<std::string>>());
  if (j.contains("constraints"))
    for (const Json& c : j.at("constraints")) {
      std::string op = c.at("op").get<std::string>();
      if (op != ">=" && op != "<=") throw ConfigError("constraint op must be >= or <=");
      spec.ltt_constraints.push_back({spec.alphabet.parse(c.at("gram").get<std::string>()),
                                      op == ">=", c.at("bound").get<int>()});
    }
  if (j.contains("literals"))
    for (const Json& l : j.at("literals"))
      spec.lt_literals.push_back(
          {predicate_from_json(l.at("pred"), spec.alphabet), l.at("value").get<bool>()});
  validate(spec);
  return spec;
}

Json model_to_json(const ModelFile& m) {
  return Json{{"learner", m.learner},
              {"weights", m.model.weights},
              {"bias", m.model.bias},
              {"feature_names", m.model.feature_names},
              {"solver", Json{{"lr", m.solver.lr},
                              {"epochs", m.solver.epochs},
                              {"tol", m.solver.tol},
                              {"l2", m.solver.l2}}},
              {"dataset_fingerprint", m.dataset_fingerprint}};
}

ModelFile model_from_json(const Json& j) {
  ModelFile m;
  m.learner = j.value("learner", std::string("logreg"));
  m.model.weights = j.at("weights").get<std::vector<double>>();
  m.model.bias = j.at("bias").get<double>();
  if (j.contains("feature_names"))
    m.model.feature_names = j.at("feature_names").get<std::vector<std::string>>();
  if (j.contains("solver")) {
    const Json& s = j.at("solver");
    m.solver.lr = s.value("lr", 0.5);
    m.solver.epochs = s.value("epochs", 5000);
    m.solver.tol = s.value("tol", 1e-8);
    m.solver.l2 = s.value("l2", 1e-4);
  }
  m.dataset_fingerprint = j.value("dataset_fingerprint", std::string());
  return m;
}

Json separator_to_json(const Separator& s) {
  return Json{{"n", s.n}, {"weights", s.weights}, {"bias", s.bias}};
}

Separator separator_from_json(const Json& j) {
  Separator s;
  s.n = j.at("n").get<int>();
  s.weights = j.at("weights").get<std::vector<double>>();
  s.bias = j.at("bias").get<double>();
  if (s.weights.size() != (std::size_t{1} << s.n))
    throw DimensionError("separator weight length does not match 2^n");
  return s;
}

Json accept_set_to_json(const AcceptSet& s) {
  return Json{{"n", s.n}, {"indices", std::vector<std::uint32_t>(s.indices.begin(), s.indices.end())}};
}

AcceptSet accept_set_from_json(const Json& j) {
  AcceptSet s;
  s.n = j.at("n").get<int>();
  for (std::uint32_t v : j.at("indices").get<std::vector<std::uint32_t>>()) s.indices.insert(v);
  return s;
}

Json witness_to_json(const Witness& w) {
  return Json{{"member_length", w.len_in},
              {"nonmember_length", w.len_out},
              {"truth_vector", std::vector<int>(w.tv.begin(), w.tv.end())},
              {"scanned_lengths", w.scanned}};
}

Json inventory_to_json(const morph::AffixInventory& inv) {
  return Json{{"prefixes", inv.prefixes()}, {"suffixes", inv.suffixes()}};
}

morph::AffixInventory inventory_from_json(const Json& j) {
  return morph::AffixInventory(j.at("prefixes").get<std::vector<std::string>>(),
                               j.at("suffixes").get<std::vector<std::string>>());
}

void save_dataset_jsonl(const DatasetFile& d, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path);
  Json meta{{"meta", true},
            {"alphabet", alphabet_to_json(d.alphabet)},
            {"seed", d.data.seed},
            {"noise_rate", d.data.noise_rate},
            {"fingerprint", d.data.spec_fingerprint}};
  out << meta.dump() << '\n';
  for (const LabeledItem& it : d.data.items) {
    Json row{{"string", d.alphabet.format(it.str)},
             {"label", it.label},
             {"source", to_string(it.source)}};
    out << row.dump() << '\n';
  }
  out.flush();
  if (!out) throw IoError("write failed: " + path);
}

DatasetFile load_dataset_jsonl(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open dataset: " + path);
  DatasetFile d;
  std::string line;
  bool have_meta = false;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    Json j;
    try {
      j = Json::parse(line);
    } catch (const Json::parse_error& e) {
      throw IoError(path + ":" + std::to_string(line_no) + ": " + e.what());
    }
    if (!have_meta) {
      if (!j.value("meta", false)) throw IoError(path + ": missing meta record on line 1");
      d.alphabet = alphabet_from_json(j.at("alphabet"));
      d.data.seed = j.value("seed", std::uint64_t{0});
      d.data.noise_rate = j.value("noise_rate", 0.0);
      d.data.spec_fingerprint = j.value("fingerprint", std::string());
      have_meta = true;
      continue;
    }
    LabeledItem it;
    it.str = d.alphabet.parse(j.at("string").get<std::string>());
    it.label = j.at("label").get<int>();
    std::string src = j.value("source", std::string("pos"));
    it.source = src == "neg" ? Provenance::Neg
                             : (src == "flipped" ? Provenance::Flipped : Provenance::Pos);
    if (it.label != 1 && it.label != -1)
      throw IoError(path + ":" + std::to_string(line_no) + ": label must be +1 or -1");
    d.data.items.push_back(std::move(it));
  }
  if (!have_meta) throw IoError(path + ": empty dataset file");
  return d;
}

std::string morph_dataset_jsonl(const morph::MorphDataset& d) {
  std::ostringstream out;
  Json meta{{"meta", true}, {"seed", d.seed}, {"skipped_negatives", d.skipped_negatives}};
  out << meta.dump() << '\n';
  for (const morph::MorphItem& it : d.items) {
    Json row{{"seq", it.seq},
             {"label", it.label},
             {"word", it.word},
             {"split", morph::to_string(it.split)}};
    out << row.dump() << '\n';
  }
  return out.str();
}

Json metrics_to_json(const Metrics& m) {
  return Json{{"accuracy", m.accuracy},
              {"precision", m.precision},
              {"recall", m.recall},
              {"f1", m.f1},
              {"confusion", Json{{"tp", m.confusion.tp},
                                 {"fp", m.confusion.fp},
                                 {"fn", m.confusion.fn},
                                 {"tn", m.confusion.tn}}}};
}

void save_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path);
  out << text;
  out.flush();
  if (!out) throw IoError("write failed: " + path);
}

std::string load_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void save_json(const std::string& path, const Json& j) { save_text(path, j.dump(2) + "\n"); }

Json load_json(const std::string& path) {
  try {
    return Json::parse(load_text(path));
  } catch (const Json::parse_error& e) {
    throw IoError(path + ": " + e.what());
  }
}

}  // namespace subreg
