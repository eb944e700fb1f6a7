#pragma once

// Boolean predicate families, one per language class, and featurization of
// strings into truth vectors / feature matrices.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "subreg/strings.hpp"

namespace subreg {

enum class PredKind : int {
  Substring = 0,
  Subsequence = 1,
  Prefix = 2,
  Suffix = 3,
  ThresholdCount = 4,
  TierSubstring = 5,
};

enum class ClassTag : int { SL = 0, SP = 1, LT = 2, PT = 3, LTT = 4, TSL = 5 };

const char* to_string(ClassTag t);
const char* to_string(PredKind k);
std::optional<ClassTag> class_tag_from_string(const std::string& s);

// Uniform pad width for window parameter k: one boundary symbol minimum so
// edge effects are observable even at k = 1.
int default_pad_width(int k);

struct Predicate {
  PredKind kind = PredKind::Substring;
  Str gram;           // probe string; may contain boundary symbols
  int threshold = 1;  // ThresholdCount only
  Tier tier;          // TierSubstring only
  int pad_width = 1;  // K applied to the input before probing

  std::string describe(const Alphabet& a) const;

  bool operator==(const Predicate& o) const {
    return kind == o.kind && gram == o.gram && threshold == o.threshold &&
           tier == o.tier && pad_width == o.pad_width;
  }
  // canonical order: (kind, tier members, gram, threshold)
  static bool order_less(const Predicate& lhs, const Predicate& rhs);
};

struct PredicateParams {
  // Window length for SL/LT/LTT/TSL, exact sequence length for SP, and
  // maximum sequence length for PT.
  int k = 2;
  // LTT: count thresholds run 1..tau for every gram unless overridden.
  int tau = 1;
  std::map<Str, int> tau_per_gram;
  // LTT: also include the LT-style window edge indicators (off by default;
  // the count family is what the experiments use).
  bool ltt_edge_indicators = false;
  // TSL: explicit tiers, or every nonempty subset of the alphabet.
  std::vector<std::vector<std::string>> tiers;
  bool all_tiers = false;
};

struct PredicateSet {
  ClassTag tag = ClassTag::SL;
  PredicateParams params;
  Alphabet alphabet;
  std::vector<Predicate> preds;

  std::size_t size() const { return preds.size(); }
  std::vector<std::string> feature_names() const;
};

using TruthVector = std::vector<std::uint8_t>;

// Row-major boolean matrix: one row per string, one column per predicate.
struct FeatureMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<std::uint8_t> bits;

  std::uint8_t at(std::size_t r, std::size_t c) const { return bits[r * cols + c]; }
  std::uint8_t& at(std::size_t r, std::size_t c) { return bits[r * cols + c]; }
};

// True when g can occur inside some padded string #^K x #^K with K >= 1,
// i.e. boundary symbols in g form a prefix run and/or suffix run only.
bool gram_feasible(const Str& g, Sym boundary);

// Enumerates the family for the class in a fixed canonical order.
PredicateSet build_predicate_set(const Alphabet& a, ClassTag tag, const PredicateParams& p);

bool eval_predicate(const Alphabet& a, const Predicate& p, const Str& x);
TruthVector truth_vector(const PredicateSet& ps, const Str& x);

FeatureMatrix feature_matrix(const PredicateSet& ps, const std::vector<Str>& xs);
FeatureMatrix feature_matrix_serial(const PredicateSet& ps, const std::vector<Str>& xs);

}  // namespace subreg
