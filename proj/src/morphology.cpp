#include "subreg/morphology.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <sstream>

namespace subreg::morph {

std::string normalize_affix(std::string tok, bool prefix_side) {
  std::size_t a = tok.find_first_not_of(" \t\r\n");
  std::size_t b = tok.find_last_not_of(" \t\r\n");
  tok = a == std::string::npos ? std::string() : tok.substr(a, b - a + 1);
  for (char& c : tok) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  while (!tok.empty() && tok.front() == '-') tok.erase(tok.begin());
  while (!tok.empty() && tok.back() == '-') tok.pop_back();
  if (tok.empty()) throw ConfigError("empty affix token");
  return prefix_side ? tok + "-" : "-" + tok;
}

AffixInventory::AffixInventory(std::vector<std::string> prefixes,
                               std::vector<std::string> suffixes) {
  for (std::string& p : prefixes) prefixes_.push_back(normalize_affix(std::move(p), true));
  for (std::string& s : suffixes) suffixes_.push_back(normalize_affix(std::move(s), false));
  std::sort(prefixes_.begin(), prefixes_.end());
  prefixes_.erase(std::unique(prefixes_.begin(), prefixes_.end()), prefixes_.end());
  std::sort(suffixes_.begin(), suffixes_.end());
  suffixes_.erase(std::unique(suffixes_.begin(), suffixes_.end()), suffixes_.end());
  if (prefixes_.empty() && suffixes_.empty()) throw ConfigError("empty affix inventory");
}

AffixInventory AffixInventory::english_default() {
  return AffixInventory(
      {"un", "re", "dis", "pre", "mis", "non", "over", "under", "out", "anti", "de", "in",
       "sub", "inter", "trans", "semi", "counter", "fore"},
      {"ness", "less", "ful", "ly", "ment", "tion", "al", "ous", "ive", "able", "ity",
       "ize", "ish", "hood", "ship", "dom", "ward", "ist", "ism", "er", "ing", "ed", "en",
       "age"});
}

std::vector<std::string> AffixInventory::all() const {
  std::vector<std::string> out = prefixes_;
  out.insert(out.end(), suffixes_.begin(), suffixes_.end());
  return out;
}

bool AffixInventory::is_prefix(const std::string& tok) const {
  return std::binary_search(prefixes_.begin(), prefixes_.end(), tok);
}

bool AffixInventory::is_suffix(const std::string& tok) const {
  return std::binary_search(suffixes_.begin(), suffixes_.end(), tok);
}

namespace {

std::string lowercase(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

// letters of an affix token without its side hyphen
std::string bare(const std::string& affix) {
  std::string out = affix;
  if (!out.empty() && out.front() == '-') out.erase(out.begin());
  if (!out.empty() && out.back() == '-') out.pop_back();
  return out;
}

}  // namespace

std::vector<std::string> segment_affixes(const std::string& word, const AffixInventory& inv,
                                         int min_stem) {
  if (min_stem < 1) throw ConfigError("min_stem must be >= 1");
  std::string stem = lowercase(word);
  std::vector<std::string> pre, suf;

  bool progress = true;
  while (progress) {
    progress = false;
    const std::string* best = nullptr;
    std::size_t best_len = 0;
    for (const std::string& p : inv.prefixes()) {
      std::string core = bare(p);
      if (core.size() > best_len && stem.size() >= core.size() + static_cast<std::size_t>(min_stem) &&
          stem.compare(0, core.size(), core) == 0) {
        best = &p;
        best_len = core.size();
      }
    }
    if (best) {
      pre.push_back(*best);
      stem.erase(0, best_len);
      progress = true;
    }
    best = nullptr;
    best_len = 0;
    for (const std::string& s : inv.suffixes()) {
      std::string core = bare(s);
      if (core.size() > best_len && stem.size() >= core.size() + static_cast<std::size_t>(min_stem) &&
          stem.compare(stem.size() - core.size(), core.size(), core) == 0) {
        best = &s;
        best_len = core.size();
      }
    }
    if (best) {
      suf.push_back(*best);
      stem.erase(stem.size() - best_len);
      progress = true;
    }
  }

  // suffixes were peeled outermost-first; flip them into surface order
  std::reverse(suf.begin(), suf.end());
  pre.insert(pre.end(), suf.begin(), suf.end());
  return pre;
}

std::vector<AffixEntry> load_affix_corpus(const std::string& path, const AffixInventory& inv,
                                          LoadReport* report, int min_stem) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open corpus: " + path);

  LoadReport local;
  LoadReport& rep = report ? *report : local;
  rep = LoadReport{};

  std::vector<AffixEntry> entries;
  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    ++rep.rows;

    std::string word, annotation;
    std::size_t tab = line.find('\t');
    if (tab == std::string::npos) {
      word = line;
    } else {
      word = line.substr(0, tab);
      annotation = line.substr(tab + 1);
    }
    // trim the word
    std::size_t a = word.find_first_not_of(" \t");
    std::size_t b = word.find_last_not_of(" \t");
    word = a == std::string::npos ? std::string() : word.substr(a, b - a + 1);

    if (word.empty()) {
      ++rep.malformed;
      rep.messages.push_back("line " + std::to_string(line_no) + ": empty word");
      continue;
    }

    AffixEntry entry;
    entry.word = lowercase(word);

    std::istringstream toks(annotation);
    std::string tok;
    bool bad = false;
    while (toks >> tok) {
      tok = lowercase(tok);
      if (!inv.contains(tok)) {
        ++rep.malformed;
        rep.messages.push_back("line " + std::to_string(line_no) + ": unknown affix \"" + tok +
                               "\"");
        bad = true;
        break;
      }
      entry.affixes.push_back(tok);
    }
    if (bad) continue;

    if (entry.affixes.empty()) {
      entry.affixes = segment_affixes(entry.word, inv, min_stem);
      entry.from_annotation = false;
      ++rep.segmented;
    } else {
      entry.from_annotation = true;
      ++rep.annotated;
    }

    if (entry.affixes.empty()) {
      ++rep.dropped_no_affix;
      continue;
    }
    entries.push_back(std::move(entry));
  }
  return entries;
}

std::vector<std::string> generate_negative(const std::vector<std::string>& seq, NegMode mode,
                                           const AffixInventory& inv, Rng& rng) {
  for (const std::string& tok : seq)
    if (!inv.contains(tok)) throw ConfigError("sequence token not in inventory: " + tok);
  if (seq.empty()) throw NoNegativePossibleError("cannot perturb an empty sequence");

  if (mode == NegMode::Permute) {
    if (seq.size() < 2) throw NoNegativePossibleError("permutation needs at least two tokens");
    bool all_same = std::all_of(seq.begin(), seq.end(),
                                [&](const std::string& t) { return t == seq.front(); });
    if (all_same) throw NoNegativePossibleError("all tokens equal; no distinct rearrangement");
    std::vector<std::string> out = seq;
    do {
      shuffle(out, rng);
    } while (out == seq);
    return out;
  }

  // substitute: positions in random order, first one with a same-side alternative
  std::vector<std::size_t> order(seq.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  shuffle(order, rng);
  for (std::size_t at : order) {
    const std::string& tok = seq[at];
    const auto& side = inv.is_prefix(tok) ? inv.prefixes() : inv.suffixes();
    if (side.size() < 2) continue;
    std::string repl;
    do {
      repl = side[rng.below(side.size())];
    } while (repl == tok);
    std::vector<std::string> out = seq;
    out[at] = repl;
    return out;
  }
  throw NoNegativePossibleError("no same-side alternative for any token");
}

const char* to_string(Split s) {
  switch (s) {
    case Split::Train: return "train";
    case Split::Dev: return "dev";
    case Split::Test: return "test";
  }
  return "?";
}

namespace {
constexpr std::uint64_t kSplitSalt = 0x5111ull;
constexpr std::uint64_t kNegSalt = 0x4E6ull;
}  // namespace

MorphDataset build_morph_dataset(const std::vector<AffixEntry>& entries,
                                 const AffixInventory& inv, int neg_per_pos,
                                 std::array<double, 3> ratios, std::uint64_t seed) {
  if (entries.empty()) throw ConfigError("no corpus entries");
  if (neg_per_pos < 0) throw ConfigError("neg_per_pos must be >= 0");
  double rsum = ratios[0] + ratios[1] + ratios[2];
  if (std::abs(rsum - 1.0) > 1e-9) throw ConfigError("split ratios must sum to 1");
  for (double r : ratios)
    if (r < 0.0) throw ConfigError("split ratios must be nonnegative");

  // words are split before any negatives exist, so a perturbed sequence can
  // never land in a different split than its source word
  std::vector<std::string> words;
  for (const AffixEntry& e : entries)
    if (std::find(words.begin(), words.end(), e.word) == words.end()) words.push_back(e.word);
  Rng split_rng(mix_seed(seed, kSplitSalt, words.size()));
  shuffle(words, split_rng);

  std::map<std::string, Split> split_of;
  const std::size_t w = words.size();
  const std::size_t n_train = static_cast<std::size_t>(ratios[0] * static_cast<double>(w));
  const std::size_t n_dev = static_cast<std::size_t>((ratios[0] + ratios[1]) * static_cast<double>(w));
  for (std::size_t i = 0; i < w; ++i)
    split_of[words[i]] = i < n_train ? Split::Train : (i < n_dev ? Split::Dev : Split::Test);

  MorphDataset data;
  data.seed = seed;
  long draw = 0;
  for (std::size_t e = 0; e < entries.size(); ++e) {
    const AffixEntry& entry = entries[e];
    Split sp = split_of[entry.word];
    data.items.push_back({entry.affixes, 1, entry.word, sp});
    for (int j = 0; j < neg_per_pos; ++j, ++draw) {
      NegMode mode = draw % 2 == 0 ? NegMode::Permute : NegMode::Substitute;
      Rng rng(mix_seed(seed, static_cast<std::uint64_t>(e) * 131 + static_cast<std::uint64_t>(j),
                       kNegSalt));
      std::vector<std::string> neg;
      try {
        neg = generate_negative(entry.affixes, mode, inv, rng);
      } catch (const NoNegativePossibleError&) {
        try {
          NegMode other = mode == NegMode::Permute ? NegMode::Substitute : NegMode::Permute;
          neg = generate_negative(entry.affixes, other, inv, rng);
        } catch (const NoNegativePossibleError&) {
          ++data.skipped_negatives;
          continue;
        }
      }
      data.items.push_back({std::move(neg), -1, entry.word, sp});
    }
  }
  return data;
}

Featurizer::Featurizer(const AffixInventory& inv) : alphabet_(inv.all()) {
  PredicateParams pt_params;
  pt_params.k = 2;
  PredicateSet pt = build_predicate_set(alphabet_, ClassTag::PT, pt_params);

  PredicateParams ltt_params;
  ltt_params.k = 2;
  ltt_params.tau = 1;
  PredicateSet ltt = build_predicate_set(alphabet_, ClassTag::LTT, ltt_params);

  preds_ = pt.preds;
  // only the bigram counts; unigram counts would duplicate the presence bits
  for (const Predicate& p : ltt.preds)
    if (p.gram.size() == 2) preds_.push_back(p);

  names_.reserve(preds_.size());
  for (const Predicate& p : preds_) names_.push_back(p.describe(alphabet_));
}

TruthVector Featurizer::featurize(const std::vector<std::string>& seq) const {
  Str s;
  s.reserve(seq.size());
  for (const std::string& tok : seq) s.push_back(alphabet_.sym(tok));  // throws on unknown
  TruthVector tv(preds_.size());
  for (std::size_t i = 0; i < preds_.size(); ++i)
    tv[i] = eval_predicate(alphabet_, preds_[i], s) ? 1 : 0;
  return tv;
}

FeatureMatrix Featurizer::featurize_all(const std::vector<MorphItem>& items) const {
  FeatureMatrix m;
  m.rows = items.size();
  m.cols = preds_.size();
  m.bits.assign(m.rows * m.cols, 0);
  std::exception_ptr first_error = nullptr;
#pragma omp parallel for schedule(static)
  for (long r = 0; r < static_cast<long>(items.size()); ++r) {
    try {
      TruthVector tv = featurize(items[static_cast<std::size_t>(r)].seq);
      std::copy(tv.begin(), tv.end(), m.bits.begin() + r * static_cast<long>(m.cols));
    } catch (...) {
#pragma omp critical
      if (!first_error) first_error = std::current_exception();
    }
  }
  if (first_error) std::rethrow_exception(first_error);
  return m;
}

std::vector<std::pair<std::string, double>> top_features(const LinearModel& m, std::size_t k) {
  std::vector<std::size_t> idx(m.weights.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return std::abs(m.weights[a]) > std::abs(m.weights[b]);
  });
  if (k < idx.size()) idx.resize(k);
  std::vector<std::pair<std::string, double>> out;
  for (std::size_t i : idx) {
    std::string name = i < m.feature_names.size() ? m.feature_names[i] : "f" + std::to_string(i);
    out.emplace_back(name, m.weights[i]);
  }
  return out;
}

Histogram margin_histogram(const LinearModel& m, const DenseMatrix& X, const std::vector<int>& y,
                           int bins) {
  if (bins < 1) throw ConfigError("histogram needs at least one bin");
  std::vector<double> margins = normalized_margins(m, X, y);
  if (margins.empty()) throw DimensionError("histogram of an empty margin list");

  double lo = *std::min_element(margins.begin(), margins.end());
  double hi = *std::max_element(margins.begin(), margins.end());
  if (lo == hi) {
    lo -= 0.5;
    hi += 0.5;
  }
  Histogram h;
  h.edges.resize(static_cast<std::size_t>(bins) + 1);
  h.counts.assign(static_cast<std::size_t>(bins), 0);
  const double width = (hi - lo) / bins;
  for (int i = 0; i <= bins; ++i) h.edges[static_cast<std::size_t>(i)] = lo + width * i;
  for (double v : margins) {
    long b = static_cast<long>((v - lo) / width);
    if (b < 0) b = 0;
    if (b >= bins) b = bins - 1;
    ++h.counts[static_cast<std::size_t>(b)];
  }
  return h;
}

PipelineResult run_pipeline(const std::vector<AffixEntry>& entries, const AffixInventory& inv,
                            const PipelineConfig& cfg) {
  PipelineResult res;
  res.dataset = build_morph_dataset(entries, inv, cfg.neg_per_pos, cfg.ratios, cfg.seed);

  Featurizer feat(inv);
  res.feature_names = feat.feature_names();

  std::vector<MorphItem> tr, dv, te;
  for (const MorphItem& it : res.dataset.items) {
    (it.split == Split::Train ? tr : it.split == Split::Dev ? dv : te).push_back(it);
  }
  if (tr.empty()) throw ConfigError("training split is empty; corpus too small for the ratios");

  auto labels = [](const std::vector<MorphItem>& v) {
    std::vector<int> y;
    y.reserve(v.size());
    for (const MorphItem& it : v) y.push_back(it.label);
    return y;
  };

  DenseMatrix x_tr = to_dense(feat.featurize_all(tr));
  res.model = train_logreg(x_tr, labels(tr), cfg.solver, feat.feature_names());
  res.train = evaluate(res.model, x_tr, labels(tr));

  DenseMatrix x_te;
  std::vector<int> y_te;
  if (!dv.empty()) {
    DenseMatrix x_dv = to_dense(feat.featurize_all(dv));
    res.dev = evaluate(res.model, x_dv, labels(dv));
    res.has_dev = true;
  }
  if (!te.empty()) {
    x_te = to_dense(feat.featurize_all(te));
    y_te = labels(te);
    res.test = evaluate(res.model, x_te, y_te);
    res.has_test = true;
  }

  res.top = top_features(res.model, cfg.top_k);
  if (res.has_test)
    res.hist = margin_histogram(res.model, x_te, y_te, cfg.hist_bins);
  else
    res.hist = margin_histogram(res.model, x_tr, labels(tr), cfg.hist_bins);
  return res;
}

}  // namespace subreg::morph
