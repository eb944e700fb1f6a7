#include "subreg/minterm.hpp"

#include <unordered_map>

#include "subreg/languages.hpp"

namespace subreg {

std::uint32_t minterm_index(const TruthVector& r) {
  if (r.size() > kMintermCap)
    throw CapExceededError("truth vector has " + std::to_string(r.size()) +
                           " predicates, cap is " + std::to_string(kMintermCap));
  std::uint32_t idx = 0;
  for (std::uint8_t bit : r) idx = (idx << 1) | (bit ? 1u : 0u);
  return idx;
}

MintermVector minterm_embed(const TruthVector& r, int cap) {
  if (static_cast<int>(r.size()) > cap)
    throw CapExceededError("embedding dimension 2^" + std::to_string(r.size()) +
                           " exceeds cap 2^" + std::to_string(cap));
  return {minterm_index(r), static_cast<int>(r.size())};
}

Separator build_separator(const AcceptSet& s, int cap) {
  if (s.n < 0 || s.n > cap)
    throw CapExceededError("separator over 2^" + std::to_string(s.n) +
                           " coordinates exceeds cap 2^" + std::to_string(cap));
  Separator sep;
  sep.n = s.n;
  sep.weights.assign(std::size_t{1} << s.n, 0.0);
  for (std::uint32_t a : s.indices) {
    if (a >= sep.weights.size())
      throw DimensionError("accept-set index " + std::to_string(a) + " out of range for n=" +
                           std::to_string(s.n));
    sep.weights[a] = 1.0;
  }
  sep.bias = -0.5;
  return sep;
}

Decision decide(const Separator& sep, const MintermVector& m) {
  if (m.n != sep.n)
    throw DimensionError("embedded point has n=" + std::to_string(m.n) +
                         " but separator has n=" + std::to_string(sep.n));
  double score = sep.weights[m.index] + sep.bias;
  return {score > 0.0, score};
}

namespace {

// all strings over the plain alphabet with length <= max_len, in length-major
// lexicographic order
template <typename Fn>
void each_plain_string(const Alphabet& a, int max_len, Fn&& fn) {
  Str w;
  fn(w);
  for (int len = 1; len <= max_len; ++len) {
    std::vector<std::size_t> idx(static_cast<std::size_t>(len), 0);
    w.assign(static_cast<std::size_t>(len), 0);
    for (;;) {
      for (int i = 0; i < len; ++i) w[static_cast<std::size_t>(i)] = static_cast<Sym>(idx[static_cast<std::size_t>(i)]);
      fn(w);
      int pos = len - 1;
      while (pos >= 0 && ++idx[static_cast<std::size_t>(pos)] == a.size()) {
        idx[static_cast<std::size_t>(pos)] = 0;
        --pos;
      }
      if (pos < 0) break;
    }
  }
}

}  // namespace

AcceptSet accept_set_for_language(const LanguageSpec& spec, const PredicateSet& ps, int max_len,
                                  int cap) {
  if (static_cast<int>(ps.size()) > cap)
    throw CapExceededError("predicate set of size " + std::to_string(ps.size()) +
                           " exceeds embedding cap " + std::to_string(cap));
  if (max_len < 0) throw ConfigError("max_len must be nonnegative");
  if (!(spec.alphabet == ps.alphabet))
    throw ConfigError("language and predicate set use different alphabets");

  AcceptSet out;
  out.n = static_cast<int>(ps.size());
  // cell -> (label seen first, witness string) so a conflict can name both sides
  std::unordered_map<std::uint32_t, std::pair<bool, Str>> seen;
  each_plain_string(spec.alphabet, max_len, [&](const Str& x) {
    bool member = membership(spec, x);
    std::uint32_t cell = minterm_index(truth_vector(ps, x));
    auto [it, fresh] = seen.emplace(cell, std::make_pair(member, x));
    if (!fresh && it->second.first != member) {
      const Alphabet& a = spec.alphabet;
      throw CellConflictError("predicates do not decide the language: strings \"" +
                              a.format(it->second.second) + "\" and \"" + a.format(x) +
                              "\" share truth-vector cell " + std::to_string(cell) +
                              " with opposite membership");
    }
    if (member) out.indices.insert(cell);
  });
  return out;
}

FeatureMatrix minterm_features(const std::vector<MintermVector>& ms) {
  FeatureMatrix m;
  m.rows = ms.size();
  if (ms.empty()) return m;
  int n = ms[0].n;
  for (const MintermVector& v : ms)
    if (v.n != n) throw DimensionError("mixed embedding dimensions in one batch");
  m.cols = std::size_t{1} << n;
  m.bits.assign(m.rows * m.cols, 0);
  for (std::size_t r = 0; r < m.rows; ++r) m.at(r, ms[r].index) = 1;
  return m;
}

}  // namespace subreg
