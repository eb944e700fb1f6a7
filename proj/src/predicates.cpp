#include "subreg/predicates.hpp"

#include <algorithm>
#include <cstdio>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace subreg {

const char* to_string(ClassTag t) {
  switch (t) {
    case ClassTag::SL: return "SL";
    case ClassTag::SP: return "SP";
    case ClassTag::LT: return "LT";
    case ClassTag::PT: return "PT";
    case ClassTag::LTT: return "LTT";
    case ClassTag::TSL: return "TSL";
  }
  return "?";
}

const char* to_string(PredKind k) {
  switch (k) {
    case PredKind::Substring: return "substr";
    case PredKind::Subsequence: return "subseq";
    case PredKind::Prefix: return "prefix";
    case PredKind::Suffix: return "suffix";
    case PredKind::ThresholdCount: return "count";
    case PredKind::TierSubstring: return "tier-substr";
  }
  return "?";
}

std::optional<ClassTag> class_tag_from_string(const std::string& s) {
  if (s == "SL" || s == "sl") return ClassTag::SL;
  if (s == "SP" || s == "sp") return ClassTag::SP;
  if (s == "LT" || s == "lt") return ClassTag::LT;
  if (s == "PT" || s == "pt") return ClassTag::PT;
  if (s == "LTT" || s == "ltt") return ClassTag::LTT;
  if (s == "TSL" || s == "tsl") return ClassTag::TSL;
  return std::nullopt;
}

int default_pad_width(int k) { return k > 2 ? k - 1 : 1; }

std::string Predicate::describe(const Alphabet& a) const {
  std::string body = a.format(gram);
  switch (kind) {
    case PredKind::Substring: return "substr(" + body + ")";
    case PredKind::Subsequence: return "subseq(" + body + ")";
    case PredKind::Prefix: return "prefix(" + body + ")";
    case PredKind::Suffix: return "suffix(" + body + ")";
    case PredKind::ThresholdCount:
      return "count(" + body + ")>=" + std::to_string(threshold);
    case PredKind::TierSubstring: {
      Str mem;
      for (Sym s : tier.members()) mem.push_back(s);
      return "tier{" + a.format(mem) + "}:substr(" + body + ")";
    }
  }
  return "?";
}

bool Predicate::order_less(const Predicate& lhs, const Predicate& rhs) {
  if (lhs.kind != rhs.kind) return static_cast<int>(lhs.kind) < static_cast<int>(rhs.kind);
  auto lm = lhs.tier.members(), rm = rhs.tier.members();
  if (lm != rm) return lm < rm;
  if (lhs.gram != rhs.gram)
    return std::lexicographical_compare(lhs.gram.begin(), lhs.gram.end(),
                                        rhs.gram.begin(), rhs.gram.end());
  return lhs.threshold < rhs.threshold;
}

bool gram_feasible(const Str& g, Sym boundary) {
  // boundary symbols may only form a leading and/or trailing run
  std::size_t i = 0;
  while (i < g.size() && g[i] == boundary) ++i;
  std::size_t j = g.size();
  while (j > i && g[j - 1] == boundary) --j;
  for (std::size_t p = i; p < j; ++p)
    if (g[p] == boundary) return false;
  return true;
}

namespace {

// All words of the given length over ids, lexicographic in id order.
template <typename Fn>
void each_word(const std::vector<Sym>& ids, int len, Fn&& fn) {
  if (len <= 0 || ids.empty()) return;
  std::vector<std::size_t> idx(static_cast<std::size_t>(len), 0);
  Str w(static_cast<std::size_t>(len));
  for (;;) {
    for (int i = 0; i < len; ++i) w[static_cast<std::size_t>(i)] = ids[idx[static_cast<std::size_t>(i)]];
    fn(w);
    int pos = len - 1;
    while (pos >= 0 && ++idx[static_cast<std::size_t>(pos)] == ids.size()) {
      idx[static_cast<std::size_t>(pos)] = 0;
      --pos;
    }
    if (pos < 0) break;
  }
}

std::vector<Sym> extended_ids(const Alphabet& a) {
  std::vector<Sym> ids;
  for (std::size_t i = 0; i < a.size(); ++i) ids.push_back(static_cast<Sym>(i));
  ids.push_back(a.boundary());
  return ids;
}

void add_edge_indicators(std::vector<Predicate>& out, const Alphabet& a, int k, int pw) {
  if (k < 2) return;
  each_word(extended_ids(a), k - 1, [&](const Str& w) {
    out.push_back({PredKind::Prefix, w, 1, Tier(), pw});
    out.push_back({PredKind::Suffix, w, 1, Tier(), pw});
  });
}

}  // namespace

PredicateSet build_predicate_set(const Alphabet& a, ClassTag tag, const PredicateParams& p) {
  if (a.size() == 0) throw ConfigError("empty alphabet");
  if (p.k < 1) throw ConfigError("class parameter k must be >= 1");
  if (p.tau < 1 && tag == ClassTag::LTT) throw ConfigError("tau must be >= 1");
  for (const auto& [g, t] : p.tau_per_gram)
    if (t < 1) throw ConfigError("per-gram tau must be >= 1");

  PredicateSet set;
  set.tag = tag;
  set.params = p;
  set.alphabet = a;
  const int pw = default_pad_width(p.k);
  const std::vector<Sym> ext = extended_ids(a);
  const Sym b = a.boundary();

  switch (tag) {
    case ClassTag::SL:
      each_word(ext, p.k, [&](const Str& w) {
        if (gram_feasible(w, b)) set.preds.push_back({PredKind::Substring, w, 1, Tier(), pw});
      });
      break;
    case ClassTag::SP:
      each_word(ext, p.k, [&](const Str& w) {
        set.preds.push_back({PredKind::Subsequence, w, 1, Tier(), pw});
      });
      break;
    case ClassTag::LT:
      each_word(ext, p.k, [&](const Str& w) {
        if (gram_feasible(w, b)) set.preds.push_back({PredKind::Substring, w, 1, Tier(), pw});
      });
      add_edge_indicators(set.preds, a, p.k, pw);
      break;
    case ClassTag::PT:
      for (int len = 1; len <= p.k; ++len)
        each_word(ext, len, [&](const Str& w) {
          set.preds.push_back({PredKind::Subsequence, w, 1, Tier(), pw});
        });
      break;
    case ClassTag::LTT:
      for (int len = 1; len <= p.k; ++len)
        each_word(ext, len, [&](const Str& w) {
          auto it = p.tau_per_gram.find(w);
          int tau_g = it == p.tau_per_gram.end() ? p.tau : it->second;
          for (int t = 1; t <= tau_g; ++t)
            set.preds.push_back({PredKind::ThresholdCount, w, t, Tier(), pw});
        });
      if (p.ltt_edge_indicators) add_edge_indicators(set.preds, a, p.k, pw);
      break;
    case ClassTag::TSL: {
      std::vector<Tier> tiers;
      if (p.all_tiers) {
        if (a.size() > 8)
          throw ConfigError("all-tiers enumeration is limited to alphabets of size <= 8");
        for (std::uint32_t m = 1; m < (1u << a.size()); ++m) {
          std::vector<std::string> toks;
          for (std::size_t i = 0; i < a.size(); ++i)
            if (m & (1u << i)) toks.push_back(a.token(static_cast<Sym>(i)));
          tiers.emplace_back(a, toks);
        }
      } else {
        if (p.tiers.empty()) throw ConfigError("TSL needs at least one tier");
        for (const auto& toks : p.tiers) {
          Tier t(a, toks);
          if (t.empty()) throw ConfigError("empty tier");
          tiers.push_back(t);
        }
      }
      for (const Tier& t : tiers) {
        std::vector<Sym> ids = t.members();
        ids.push_back(b);
        each_word(ids, p.k, [&](const Str& w) {
          set.preds.push_back({PredKind::TierSubstring, w, 1, t, pw});
        });
      }
      break;
    }
  }

  std::sort(set.preds.begin(), set.preds.end(), Predicate::order_less);
  return set;
}

bool eval_predicate(const Alphabet& a, const Predicate& p, const Str& x) {
  Str xt = pad(x, p.pad_width, a.boundary());
  switch (p.kind) {
    case PredKind::Substring:
      return contains_substring(xt, p.gram);
    case PredKind::Subsequence:
      return contains_subsequence(xt, p.gram);
    case PredKind::Prefix:
      return p.gram.size() <= xt.size() && prefix(xt, p.gram.size()) == p.gram;
    case PredKind::Suffix:
      return p.gram.size() <= xt.size() && suffix(xt, p.gram.size()) == p.gram;
    case PredKind::ThresholdCount:
      return count_occurrences(xt, p.gram) >= p.threshold;
    case PredKind::TierSubstring:
      return contains_substring(project_tier(xt, p.tier, a.boundary()), p.gram);
  }
  return false;
}

TruthVector truth_vector(const PredicateSet& ps, const Str& x) {
  TruthVector r(ps.preds.size());
  for (std::size_t i = 0; i < ps.preds.size(); ++i)
    r[i] = eval_predicate(ps.alphabet, ps.preds[i], x) ? 1 : 0;
  return r;
}

std::vector<std::string> PredicateSet::feature_names() const {
  std::vector<std::string> names;
  names.reserve(preds.size());
  for (const Predicate& p : preds) names.push_back(p.describe(alphabet));
  return names;
}

FeatureMatrix feature_matrix_serial(const PredicateSet& ps, const std::vector<Str>& xs) {
  FeatureMatrix m;
  m.rows = xs.size();
  m.cols = ps.preds.size();
  m.bits.assign(m.rows * m.cols, 0);
  for (std::size_t r = 0; r < m.rows; ++r) {
    TruthVector tv = truth_vector(ps, xs[r]);
    std::copy(tv.begin(), tv.end(), m.bits.begin() + static_cast<long>(r * m.cols));
  }
  return m;
}

FeatureMatrix feature_matrix(const PredicateSet& ps, const std::vector<Str>& xs) {
  FeatureMatrix m;
  m.rows = xs.size();
  m.cols = ps.preds.size();
  m.bits.assign(m.rows * m.cols, 0);
  // rows are independent, so the parallel result is identical to the serial one
#pragma omp parallel for schedule(static)
  for (long r = 0; r < static_cast<long>(m.rows); ++r) {
    TruthVector tv = truth_vector(ps, xs[static_cast<std::size_t>(r)]);
    std::copy(tv.begin(), tv.end(), m.bits.begin() + r * static_cast<long>(m.cols));
  }
  return m;
}

}  // namespace subreg
