#pragma once

// Language specifications with exact membership oracles, plus samplers that
// draw positive and negative examples and assemble labeled datasets.

#include <cstdint>
#include <string>
#include <vector>

#include "subreg/predicates.hpp"
#include "subreg/rng.hpp"

namespace subreg {

// count(x~, gram) >= bound (at_least) or <= bound (otherwise)
struct LttConstraint {
  Str gram;
  bool at_least = true;
  int bound = 1;
};

// boolean combination literal for LT: predicate must evaluate to `value`
struct LtLiteral {
  Predicate pred;
  bool value = true;
};

struct LanguageSpec {
  ClassTag tag = ClassTag::SL;
  Alphabet alphabet;
  int k = 2;  // window length, or max subsequence length for SP/PT

  std::vector<Str> forbidden;                  // SL/TSL grams, SP/PT subsequences
  Tier tier;                                   // TSL only
  std::vector<LtLiteral> lt_literals;          // LT only
  std::vector<LttConstraint> ltt_constraints;  // LTT only

  int pad_width() const { return default_pad_width(k); }
  // Short human-readable digest recorded with datasets and model files.
  std::string fingerprint() const;
};

void validate(const LanguageSpec& spec);  // throws ConfigError

bool membership(const LanguageSpec& spec, const Str& x);

struct LenRange {
  int lo = 5;
  int hi = 15;
};

inline constexpr int kSamplerRetryBudget = 10000;

// Both samplers verify the drawn string against the membership oracle before
// returning it, and throw SamplerExhaustedError after the retry budget.
Str sample_positive(const LanguageSpec& spec, LenRange len, Rng& rng);
Str sample_negative(const LanguageSpec& spec, LenRange len, Rng& rng);

enum class Provenance : int { Pos = 0, Neg = 1, Flipped = 2 };
const char* to_string(Provenance p);

struct LabeledItem {
  Str str;
  int label = 1;  // +1 / -1
  Provenance source = Provenance::Pos;
};

struct LabeledDataset {
  std::vector<LabeledItem> items;
  std::uint64_t seed = 0;
  double noise_rate = 0.0;
  std::string spec_fingerprint;

  std::vector<Str> strings() const;
  std::vector<int> labels() const;
};

// n_pos positives then n_neg negatives, sampled with per-item derived seeds
// (so the parallel and serial versions agree bit for bit), then shuffled.
LabeledDataset generate_dataset(const LanguageSpec& spec, long n_pos, long n_neg, LenRange len,
                                std::uint64_t seed);
LabeledDataset generate_dataset_serial(const LanguageSpec& spec, long n_pos, long n_neg,
                                       LenRange len, std::uint64_t seed);

// Independently flips each label with the given probability; flipped items
// are marked in their provenance tag. rate must lie in [0, 1].
LabeledDataset flip_labels(const LabeledDataset& data, double rate, std::uint64_t seed);

// Default experiment setups, one per class used in the synthetic sweeps.
LanguageSpec default_sl3_spec();
LanguageSpec default_sp2_spec();
LanguageSpec default_ltt2_spec();
LenRange default_len_range(ClassTag tag);

// The predicate family that decides the given language (same class, same k,
// and for LTT a tau high enough to express every constraint bound).
PredicateSet deciding_predicates(const LanguageSpec& spec);

// Presence-style variant: one threshold-1 feature per gram. For LTT this can
// drop deciding predicates with higher bounds, so separability is not
// guaranteed; the margin-quantile probe uses it for exactly that reason.
PredicateSet presence_predicates(const LanguageSpec& spec);

}  // namespace subreg
