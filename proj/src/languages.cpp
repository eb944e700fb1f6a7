#include "subreg/languages.hpp"

#include <algorithm>
#include <exception>
#include <optional>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace subreg {

const char* to_string(Provenance p) {
  switch (p) {
    case Provenance::Pos: return "pos";
    case Provenance::Neg: return "neg";
    case Provenance::Flipped: return "flipped";
  }
  return "?";
}

std::string LanguageSpec::fingerprint() const {
  std::ostringstream out;
  out << to_string(tag) << "(k=" << k << ",sigma=[";
  for (std::size_t i = 0; i < alphabet.size(); ++i) {
    if (i) out << ",";
    out << alphabet.token(static_cast<Sym>(i));
  }
  out << "]";
  if (!forbidden.empty()) {
    out << ",forbidden=[";
    for (std::size_t i = 0; i < forbidden.size(); ++i) {
      if (i) out << ",";
      out << alphabet.format(forbidden[i]);
    }
    out << "]";
  }
  if (!tier.empty()) {
    Str mem;
    for (Sym s : tier.members()) mem.push_back(s);
    out << ",tier=[" << alphabet.format(mem) << "]";
  }
  if (!ltt_constraints.empty()) {
    out << ",constraints=[";
    for (std::size_t i = 0; i < ltt_constraints.size(); ++i) {
      const LttConstraint& c = ltt_constraints[i];
      if (i) out << ",";
      out << "count(" << alphabet.format(c.gram) << ")" << (c.at_least ? ">=" : "<=") << c.bound;
    }
    out << "]";
  }
  if (!lt_literals.empty()) {
    out << ",literals=[";
    for (std::size_t i = 0; i < lt_literals.size(); ++i) {
      if (i) out << ",";
      if (!lt_literals[i].value) out << "!";
      out << lt_literals[i].pred.describe(alphabet);
    }
    out << "]";
  }
  out << ")";
  return out.str();
}

void validate(const LanguageSpec& spec) {
  if (spec.alphabet.size() == 0) throw ConfigError("language spec has an empty alphabet");
  if (spec.k < 1) throw ConfigError("class parameter k must be >= 1");

  auto check_gram = [&](const Str& g, bool exact_len, const char* what) {
    if (g.empty()) throw ConfigError(std::string(what) + " must be nonempty");
    if (exact_len && static_cast<int>(g.size()) != spec.k)
      throw ConfigError(std::string(what) + " \"" + spec.alphabet.format(g) +
                        "\" must have length k=" + std::to_string(spec.k));
    if (!exact_len && static_cast<int>(g.size()) > spec.k)
      throw ConfigError(std::string(what) + " \"" + spec.alphabet.format(g) +
                        "\" exceeds max length k=" + std::to_string(spec.k));
    if (!spec.alphabet.valid_padded(g))
      throw ConfigError(std::string(what) + " contains an out-of-range symbol id");
  };

  switch (spec.tag) {
    case ClassTag::SL:
      for (const Str& g : spec.forbidden) check_gram(g, true, "forbidden gram");
      break;
    case ClassTag::SP:
      for (const Str& g : spec.forbidden) check_gram(g, true, "forbidden subsequence");
      break;
    case ClassTag::PT:
      for (const Str& g : spec.forbidden) check_gram(g, false, "forbidden subsequence");
      break;
    case ClassTag::TSL: {
      if (spec.tier.empty()) throw ConfigError("TSL spec needs a nonempty tier");
      for (const Str& g : spec.forbidden) {
        check_gram(g, true, "forbidden tier gram");
        for (Sym s : g)
          if (!spec.alphabet.is_boundary(s) && !spec.tier.contains(s))
            throw ConfigError("forbidden tier gram \"" + spec.alphabet.format(g) +
                              "\" uses a symbol outside the tier");
      }
      break;
    }
    case ClassTag::LT:
      if (spec.lt_literals.empty()) throw ConfigError("LT spec needs at least one literal");
      for (const LtLiteral& lit : spec.lt_literals) {
        if (lit.pred.gram.empty()) throw ConfigError("LT literal has an empty gram");
        if (!spec.alphabet.valid_padded(lit.pred.gram))
          throw ConfigError("LT literal gram has an out-of-range symbol id");
      }
      break;
    case ClassTag::LTT:
      if (spec.ltt_constraints.empty()) throw ConfigError("LTT spec needs at least one constraint");
      for (const LttConstraint& c : spec.ltt_constraints) {
        check_gram(c.gram, false, "count gram");
        if (c.bound < 0) throw ConfigError("count bound must be nonnegative");
      }
      break;
  }
}

bool membership(const LanguageSpec& spec, const Str& x) {
  const Sym b = spec.alphabet.boundary();
  const Str xt = pad(x, spec.pad_width(), b);
  switch (spec.tag) {
    case ClassTag::SL:
      for (const Str& g : spec.forbidden)
        if (contains_substring(xt, g)) return false;
      return true;
    case ClassTag::SP:
    case ClassTag::PT:
      for (const Str& h : spec.forbidden)
        if (contains_subsequence(xt, h)) return false;
      return true;
    case ClassTag::TSL: {
      const Str proj = project_tier(xt, spec.tier, b);
      for (const Str& g : spec.forbidden)
        if (contains_substring(proj, g)) return false;
      return true;
    }
    case ClassTag::LT:
      for (const LtLiteral& lit : spec.lt_literals)
        if (eval_predicate(spec.alphabet, lit.pred, x) != lit.value) return false;
      return true;
    case ClassTag::LTT:
      for (const LttConstraint& c : spec.ltt_constraints) {
        long cnt = count_occurrences(xt, c.gram);
        if (c.at_least ? cnt < c.bound : cnt > c.bound) return false;
      }
      return true;
  }
  return false;
}

namespace {

struct GramParts {
  int lead = 0;   // leading boundary symbols
  Str core;       // plain-symbol middle
  int trail = 0;  // trailing boundary symbols
  bool interior = false;
};

GramParts split_gram(const Str& g, Sym b) {
  GramParts p;
  std::size_t i = 0;
  while (i < g.size() && g[i] == b) ++i;
  std::size_t j = g.size();
  while (j > i && g[j - 1] == b) --j;
  p.lead = static_cast<int>(i);
  p.trail = static_cast<int>(g.size() - j);
  for (std::size_t q = i; q < j; ++q) {
    if (g[q] == b) p.interior = true;
    p.core.push_back(g[q]);
  }
  return p;
}

bool ends_with(const Str& s, const Str& t) {
  return t.size() <= s.size() &&
         std::equal(t.begin(), t.end(), s.end() - static_cast<long>(t.size()));
}

Str random_string(const Alphabet& a, LenRange len, Rng& rng) {
  long n = rng.range(len.lo, len.hi);
  Str x(static_cast<std::size_t>(n));
  for (Sym& c : x) c = static_cast<Sym>(rng.below(a.size()));
  return x;
}

[[noreturn]] void exhausted(const LanguageSpec& spec, const char* which) {
  throw SamplerExhaustedError(std::string(which) + " sampler gave up after " +
                              std::to_string(kSamplerRetryBudget) + " attempts for " +
                              spec.fingerprint());
}

// Grows a string symbol by symbol, never completing a forbidden gram whose
// last symbol is plain. Right-anchored grams are caught by the caller's final
// membership check. For TSL the history is the tier projection.
std::optional<Str> local_positive_draft(const LanguageSpec& spec, LenRange len, Rng& rng) {
  const Alphabet& a = spec.alphabet;
  const Sym b = a.boundary();
  const bool tiered = spec.tag == ClassTag::TSL;
  const long n = rng.range(len.lo, len.hi);

  std::vector<std::pair<Str, Sym>> blockers;  // (gram minus last symbol, last symbol)
  for (const Str& g : spec.forbidden) {
    if (g.back() == b) continue;
    blockers.emplace_back(Str(g.begin(), g.end() - 1), g.back());
  }

  Str hist(static_cast<std::size_t>(spec.pad_width()), b);
  Str x;
  std::vector<Sym> order(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) order[i] = static_cast<Sym>(i);

  for (long pos = 0; pos < n; ++pos) {
    shuffle(order, rng);
    bool placed = false;
    for (Sym s : order) {
      bool fatal = false;
      if (!tiered || spec.tier.contains(s)) {
        for (const auto& [head, last] : blockers)
          if (s == last && ends_with(hist, head)) {
            fatal = true;
            break;
          }
      }
      if (fatal) continue;
      x.push_back(s);
      if (!tiered || spec.tier.contains(s)) hist.push_back(s);
      placed = true;
      break;
    }
    if (!placed) return std::nullopt;
  }
  return x;
}

// Forces one occurrence of the gram into x. Anchored grams overwrite the
// matching edge; free grams insert when the length budget allows, otherwise
// overwrite a random window.
bool plant_gram(Str& x, const GramParts& p, LenRange len, Rng& rng) {
  if (p.interior || p.core.empty()) return false;
  const long c = static_cast<long>(p.core.size());
  if (p.lead > 0 && p.trail > 0) {
    if (c < len.lo || c > len.hi) return false;
    x = p.core;
    return true;
  }
  if (p.lead > 0) {
    if (static_cast<long>(x.size()) < c) return false;
    std::copy(p.core.begin(), p.core.end(), x.begin());
    return true;
  }
  if (p.trail > 0) {
    if (static_cast<long>(x.size()) < c) return false;
    std::copy(p.core.begin(), p.core.end(), x.end() - c);
    return true;
  }
  if (static_cast<long>(x.size()) + c <= len.hi) {
    std::size_t at = static_cast<std::size_t>(rng.below(x.size() + 1));
    x.insert(x.begin() + static_cast<long>(at), p.core.begin(), p.core.end());
    return true;
  }
  if (static_cast<long>(x.size()) >= c) {
    std::size_t at = static_cast<std::size_t>(rng.below(x.size() - p.core.size() + 1));
    std::copy(p.core.begin(), p.core.end(), x.begin() + static_cast<long>(at));
    return true;
  }
  return false;
}

// Occurrence start offsets of g inside the padded form of x.
std::vector<long> occurrence_starts(const Str& xt, const Str& g) {
  std::vector<long> starts;
  if (g.empty() || g.size() > xt.size()) return starts;
  for (std::size_t i = 0; i + g.size() <= xt.size(); ++i)
    if (std::equal(g.begin(), g.end(), xt.begin() + static_cast<long>(i)))
      starts.push_back(static_cast<long>(i));
  return starts;
}

// Rewrites one plain symbol inside a random occurrence of the gram.
bool mutate_occurrence(Str& x, const Str& gram, const GramParts& p, const LanguageSpec& spec,
                       Rng& rng) {
  const Alphabet& a = spec.alphabet;
  if (p.core.empty() || p.interior || a.size() < 2) return false;
  const int K = spec.pad_width();
  Str xt = pad(x, K, a.boundary());
  std::vector<long> starts = occurrence_starts(xt, gram);
  if (starts.empty()) return false;
  long s = starts[rng.below(starts.size())];
  long core_begin = s + p.lead - K;  // x coordinates
  long at = core_begin + static_cast<long>(rng.below(p.core.size()));
  Sym old = x[static_cast<std::size_t>(at)];
  Sym nu;
  do {
    nu = static_cast<Sym>(rng.below(a.size()));
  } while (nu == old);
  x[static_cast<std::size_t>(at)] = nu;
  return true;
}

long constraint_count(const LanguageSpec& spec, const Str& x, const LttConstraint& c) {
  return count_occurrences(pad(x, spec.pad_width(), spec.alphabet.boundary()), c.gram);
}

// One random draw followed by a bounded number of targeted repairs.
std::optional<Str> ltt_try_positive(const LanguageSpec& spec, LenRange len, Rng& rng) {
  Str x = random_string(spec.alphabet, len, rng);
  const int rounds = 8 + 8 * static_cast<int>(spec.ltt_constraints.size());
  for (int r = 0; r < rounds; ++r) {
    const LttConstraint* viol = nullptr;
    for (const LttConstraint& c : spec.ltt_constraints) {
      long cnt = constraint_count(spec, x, c);
      if (c.at_least ? cnt < c.bound : cnt > c.bound) {
        viol = &c;
        break;
      }
    }
    if (!viol) return x;
    GramParts p = split_gram(viol->gram, spec.alphabet.boundary());
    bool ok = viol->at_least ? plant_gram(x, p, len, rng)
                             : mutate_occurrence(x, viol->gram, p, spec, rng);
    if (!ok) return std::nullopt;
  }
  return std::nullopt;
}

// Subsequence-avoidance via the greedy matching automaton: block any symbol
// that would complete the plain core of a feasible forbidden sequence.
std::optional<Str> subseq_positive_draft(const LanguageSpec& spec, LenRange len, Rng& rng) {
  const Alphabet& a = spec.alphabet;
  const Sym b = a.boundary();
  const long n = rng.range(len.lo, len.hi);

  std::vector<Str> cores;
  for (const Str& h : spec.forbidden) {
    GramParts p = split_gram(h, b);
    if (p.interior) continue;         // can never fire
    if (p.core.empty()) return std::nullopt;  // fires on every string
    cores.push_back(p.core);
  }

  std::vector<std::size_t> prog(cores.size(), 0);
  Str x;
  std::vector<Sym> order(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) order[i] = static_cast<Sym>(i);

  for (long pos = 0; pos < n; ++pos) {
    shuffle(order, rng);
    bool placed = false;
    for (Sym s : order) {
      bool fatal = false;
      for (std::size_t i = 0; i < cores.size(); ++i)
        if (prog[i] + 1 == cores[i].size() && cores[i].back() == s) {
          fatal = true;
          break;
        }
      if (fatal) continue;
      for (std::size_t i = 0; i < cores.size(); ++i)
        if (prog[i] < cores[i].size() && cores[i][prog[i]] == s) ++prog[i];
      x.push_back(s);
      placed = true;
      break;
    }
    if (!placed) return std::nullopt;
  }
  return x;
}

Str positive_impl(const LanguageSpec& spec, LenRange len, Rng& rng) {
  for (int attempt = 0; attempt < kSamplerRetryBudget; ++attempt) {
    std::optional<Str> draft;
    switch (spec.tag) {
      case ClassTag::SL:
      case ClassTag::TSL:
        draft = local_positive_draft(spec, len, rng);
        break;
      case ClassTag::SP:
      case ClassTag::PT:
        draft = subseq_positive_draft(spec, len, rng);
        break;
      case ClassTag::LT:
        draft = random_string(spec.alphabet, len, rng);
        break;
      case ClassTag::LTT:
        draft = ltt_try_positive(spec, len, rng);
        break;
    }
    if (draft && membership(spec, *draft)) return *draft;
  }
  exhausted(spec, "positive");
}

Str forbidden_plant_negative(const LanguageSpec& spec, LenRange len, Rng& rng) {
  const Sym b = spec.alphabet.boundary();
  std::vector<GramParts> parts;
  for (const Str& g : spec.forbidden) parts.push_back(split_gram(g, b));

  for (int attempt = 0; attempt < kSamplerRetryBudget; ++attempt) {
    Str x = random_string(spec.alphabet, len, rng);
    const GramParts& p = parts[rng.below(parts.size())];
    bool planted = false;
    if (spec.tag == ClassTag::SL || spec.tag == ClassTag::TSL) {
      planted = plant_gram(x, p, len, rng);
    } else {
      // subsequence plant: scatter the core over sorted random positions
      if (!p.interior && !p.core.empty() &&
          static_cast<long>(p.core.size()) <= static_cast<long>(x.size())) {
        std::vector<std::size_t> pos(x.size());
        for (std::size_t i = 0; i < pos.size(); ++i) pos[i] = i;
        shuffle(pos, rng);
        pos.resize(p.core.size());
        std::sort(pos.begin(), pos.end());
        for (std::size_t i = 0; i < pos.size(); ++i) x[pos[i]] = p.core[i];
        planted = true;
      }
    }
    if (planted && !membership(spec, x)) return x;
  }
  exhausted(spec, "negative");
}

Str ltt_negative(const LanguageSpec& spec, LenRange len, Rng& rng) {
  for (int attempt = 0; attempt < kSamplerRetryBudget; ++attempt) {
    std::optional<Str> base = ltt_try_positive(spec, len, rng);
    if (!base) continue;
    Str x = *base;
    const LttConstraint& c = spec.ltt_constraints[rng.below(spec.ltt_constraints.size())];
    GramParts p = split_gram(c.gram, spec.alphabet.boundary());
    bool changed = false;
    for (int tries = 0; tries < 64; ++tries) {
      long cnt = constraint_count(spec, x, c);
      if (c.at_least ? cnt < c.bound : cnt > c.bound) {
        changed = true;
        break;
      }
      bool ok = c.at_least ? mutate_occurrence(x, c.gram, p, spec, rng)
                           : plant_gram(x, p, len, rng);
      if (!ok) break;
    }
    if (changed && !membership(spec, x)) return x;
  }
  exhausted(spec, "negative");
}

Str rejection_negative(const LanguageSpec& spec, LenRange len, Rng& rng) {
  for (int attempt = 0; attempt < kSamplerRetryBudget; ++attempt) {
    Str x = random_string(spec.alphabet, len, rng);
    if (!membership(spec, x)) return x;
  }
  exhausted(spec, "negative");
}

}  // namespace

Str sample_positive(const LanguageSpec& spec, LenRange len, Rng& rng) {
  validate(spec);
  if (len.lo < 0 || len.hi < len.lo) throw ConfigError("bad length range");
  return positive_impl(spec, len, rng);
}

Str sample_negative(const LanguageSpec& spec, LenRange len, Rng& rng) {
  validate(spec);
  if (len.lo < 0 || len.hi < len.lo) throw ConfigError("bad length range");
  switch (spec.tag) {
    case ClassTag::SL:
    case ClassTag::TSL:
    case ClassTag::SP:
    case ClassTag::PT:
      if (spec.forbidden.empty()) exhausted(spec, "negative");
      return forbidden_plant_negative(spec, len, rng);
    case ClassTag::LTT:
      return ltt_negative(spec, len, rng);
    case ClassTag::LT:
      return rejection_negative(spec, len, rng);
  }
  exhausted(spec, "negative");
}

std::vector<Str> LabeledDataset::strings() const {
  std::vector<Str> out;
  out.reserve(items.size());
  for (const LabeledItem& it : items) out.push_back(it.str);
  return out;
}

std::vector<int> LabeledDataset::labels() const {
  std::vector<int> out;
  out.reserve(items.size());
  for (const LabeledItem& it : items) out.push_back(it.label);
  return out;
}

namespace {

constexpr std::uint64_t kItemSalt = 0xA11CEull;
constexpr std::uint64_t kShuffleSalt = 0x5AFFEull;
constexpr std::uint64_t kFlipSalt = 0xF11Bull;

LabeledDataset generate_impl(const LanguageSpec& spec, long n_pos, long n_neg, LenRange len,
                             std::uint64_t seed, bool parallel) {
  validate(spec);
  if (n_pos < 0 || n_neg < 0) throw ConfigError("negative sample counts");
  const long total = n_pos + n_neg;

  LabeledDataset data;
  data.items.resize(static_cast<std::size_t>(total));
  data.seed = seed;
  data.noise_rate = 0.0;
  data.spec_fingerprint = spec.fingerprint();

  std::exception_ptr first_error = nullptr;

  // every item draws from its own derived seed, so the assignment to
  // data.items[i] does not depend on scheduling
#pragma omp parallel for schedule(static) if (parallel)
  for (long i = 0; i < total; ++i) {
    try {
      Rng rng(mix_seed(seed, static_cast<std::uint64_t>(i), kItemSalt));
      LabeledItem& item = data.items[static_cast<std::size_t>(i)];
      if (i < n_pos) {
        item.str = positive_impl(spec, len, rng);
        item.label = 1;
        item.source = Provenance::Pos;
      } else {
        item.str = sample_negative(spec, len, rng);
        item.label = -1;
        item.source = Provenance::Neg;
      }
    } catch (...) {
#pragma omp critical
      if (!first_error) first_error = std::current_exception();
    }
  }
  if (first_error) std::rethrow_exception(first_error);

  Rng shuf(mix_seed(seed, kShuffleSalt, static_cast<std::uint64_t>(total)));
  shuffle(data.items, shuf);
  return data;
}

}  // namespace

LabeledDataset generate_dataset(const LanguageSpec& spec, long n_pos, long n_neg, LenRange len,
                                std::uint64_t seed) {
  return generate_impl(spec, n_pos, n_neg, len, seed, true);
}

LabeledDataset generate_dataset_serial(const LanguageSpec& spec, long n_pos, long n_neg,
                                       LenRange len, std::uint64_t seed) {
  return generate_impl(spec, n_pos, n_neg, len, seed, false);
}

LabeledDataset flip_labels(const LabeledDataset& data, double rate, std::uint64_t seed) {
  if (!(rate >= 0.0 && rate <= 1.0)) throw ConfigError("flip rate must lie in [0, 1]");
  LabeledDataset out = data;
  out.noise_rate = rate;
  for (std::size_t i = 0; i < out.items.size(); ++i) {
    Rng rng(mix_seed(seed, static_cast<std::uint64_t>(i), kFlipSalt));
    if (rng.real01() < rate) {
      out.items[i].label = -out.items[i].label;
      out.items[i].source = Provenance::Flipped;
    }
  }
  return out;
}

LanguageSpec default_sl3_spec() {
  LanguageSpec spec;
  spec.tag = ClassTag::SL;
  spec.alphabet = Alphabet({"a", "b", "c", "d"});
  spec.k = 3;
  spec.forbidden = {spec.alphabet.parse("abc"), spec.alphabet.parse("bba"),
                    spec.alphabet.parse("ca#")};
  return spec;
}

LanguageSpec default_sp2_spec() {
  LanguageSpec spec;
  spec.tag = ClassTag::SP;
  spec.alphabet = Alphabet({"a", "b", "c", "d"});
  spec.k = 2;
  spec.forbidden = {spec.alphabet.parse("ac"), spec.alphabet.parse("bd")};
  return spec;
}

LanguageSpec default_ltt2_spec() {
  LanguageSpec spec;
  spec.tag = ClassTag::LTT;
  spec.alphabet = Alphabet({"a", "b", "c"});
  spec.k = 2;
  spec.ltt_constraints = {
      {spec.alphabet.parse("a"), true, 2},   // at least two a's
      {spec.alphabet.parse("#a"), true, 1},  // begins with a
      {spec.alphabet.parse("bb"), false, 1}, // at most one bb
      {spec.alphabet.parse("c#"), false, 0}, // must not end in c
  };
  return spec;
}

LenRange default_len_range(ClassTag tag) {
  if (tag == ClassTag::SP) return {6, 18};
  return {5, 15};
}

PredicateSet deciding_predicates(const LanguageSpec& spec) {
  validate(spec);
  PredicateParams p;
  p.k = spec.k;
  switch (spec.tag) {
    case ClassTag::SL:
    case ClassTag::SP:
    case ClassTag::PT:
    case ClassTag::LT:
      break;
    case ClassTag::LTT: {
      // tau must make every constraint bound observable: >= b needs the
      // threshold b, <= b needs b + 1
      int tau = 1;
      for (const LttConstraint& c : spec.ltt_constraints)
        tau = std::max(tau, c.at_least ? c.bound : c.bound + 1);
      p.tau = tau;
      break;
    }
    case ClassTag::TSL: {
      std::vector<std::string> toks;
      for (Sym s : spec.tier.members()) toks.push_back(spec.alphabet.token(s));
      p.tiers = {toks};
      break;
    }
  }
  return build_predicate_set(spec.alphabet, spec.tag, p);
}

PredicateSet presence_predicates(const LanguageSpec& spec) {
  validate(spec);
  PredicateParams p;
  p.k = spec.k;
  p.tau = 1;
  if (spec.tag == ClassTag::TSL) {
    std::vector<std::string> toks;
    for (Sym s : spec.tier.members()) toks.push_back(spec.alphabet.token(s));
    p.tiers = {toks};
  }
  return build_predicate_set(spec.alphabet, spec.tag, p);
}

}  // namespace subreg
