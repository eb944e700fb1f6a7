#pragma once

// One-hot embedding of truth vectors and the explicit separating hyperplane
// over the embedded space. Every finite predicate set makes its language
// linearly separable here, with margin exactly 1/2 on the raw score.

#include <cstdint>
#include <set>
#include <vector>

#include "subreg/predicates.hpp"

namespace subreg {

struct LanguageSpec;  // languages.hpp

inline constexpr int kMintermCap = 20;

// Index of the single hot coordinate in {0,1}^(2^n). Bit order is MSB-first:
// predicate 0 is the most significant bit, so r = (1,0) maps to index 2.
std::uint32_t minterm_index(const TruthVector& r);

struct MintermVector {
  std::uint32_t index = 0;
  int n = 0;  // number of predicates
};

MintermVector minterm_embed(const TruthVector& r, int cap = kMintermCap);

// Set of accepted truth vectors, stored as minterm indices.
struct AcceptSet {
  int n = 0;
  std::set<std::uint32_t> indices;

  bool contains(const TruthVector& r) const { return indices.count(minterm_index(r)) > 0; }
  void insert(const TruthVector& r) { indices.insert(minterm_index(r)); }
};

// w_a = 1 iff a is accepted, bias -1/2; every embedded point scores +-1/2.
struct Separator {
  int n = 0;
  std::vector<double> weights;  // 2^n entries, each 0 or 1
  double bias = -0.5;
};

Separator build_separator(const AcceptSet& s, int cap = kMintermCap);

struct Decision {
  bool accept = false;
  double score = 0.0;  // w . phi(r) + b
};

Decision decide(const Separator& sep, const MintermVector& m);

// Enumerates all strings up to max_len, records which truth-vector cells the
// language occupies, and verifies no cell holds both a member and a
// non-member (CellConflictError otherwise, naming two offending strings).
AcceptSet accept_set_for_language(const LanguageSpec& spec, const PredicateSet& ps, int max_len,
                                  int cap = kMintermCap);

// Dense one-hot rows for a batch of embedded points; used to feed the
// linear learners with minterm features.
FeatureMatrix minterm_features(const std::vector<MintermVector>& ms);

}  // namespace subreg
