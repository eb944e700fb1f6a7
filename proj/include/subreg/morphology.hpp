#pragma once

// Affix-sequence well-formedness pipeline: corpus loading with a fallback
// greedy segmenter, perturbation-based negatives, word-level splits, and a
// featurizer that treats affix tokens as the alphabet.

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "subreg/learners.hpp"
#include "subreg/predicates.hpp"
#include "subreg/rng.hpp"

namespace subreg::morph {

// trims, lowercases and adds the side hyphen ("un" -> "un-", "ness" -> "-ness")
std::string normalize_affix(std::string tok, bool prefix_side);

class AffixInventory {
 public:
  AffixInventory() = default;
  AffixInventory(std::vector<std::string> prefixes, std::vector<std::string> suffixes);

  static AffixInventory english_default();

  const std::vector<std::string>& prefixes() const { return prefixes_; }
  const std::vector<std::string>& suffixes() const { return suffixes_; }
  // prefixes then suffixes; this fixed order is the featurizer's alphabet
  std::vector<std::string> all() const;

  bool is_prefix(const std::string& tok) const;
  bool is_suffix(const std::string& tok) const;
  bool contains(const std::string& tok) const { return is_prefix(tok) || is_suffix(tok); }
  std::size_t size() const { return prefixes_.size() + suffixes_.size(); }

 private:
  std::vector<std::string> prefixes_;  // sorted, unique, "xxx-" form
  std::vector<std::string> suffixes_;  // sorted, unique, "-xxx" form
};

// Peels the longest matching prefix, then the longest matching suffix,
// repeating until the remaining stem would drop below min_stem letters.
// Returns affixes in surface order (prefixes left to right, then suffixes
// left to right). An unsegmentable word yields an empty list.
std::vector<std::string> segment_affixes(const std::string& word, const AffixInventory& inv,
                                         int min_stem = 3);

struct AffixEntry {
  std::string word;
  std::vector<std::string> affixes;
  bool from_annotation = true;  // false when the segmenter produced the list
};

struct LoadReport {
  long rows = 0;
  long annotated = 0;
  long segmented = 0;
  long dropped_no_affix = 0;
  long malformed = 0;
  std::vector<std::string> messages;  // one per malformed row, with line number
};

// Tab-separated rows: word, then optionally a space-separated affix
// annotation. Unannotated words go through the segmenter. Words that end up
// with no affixes are dropped (counted in the report). Malformed rows
// (unknown affix tokens, empty word) are skipped and reported by line.
std::vector<AffixEntry> load_affix_corpus(const std::string& path, const AffixInventory& inv,
                                          LoadReport* report = nullptr, int min_stem = 3);

enum class NegMode : int { Permute = 0, Substitute = 1 };

// Permute: uniformly drawn non-identity rearrangement (needs >= 2 distinct
// tokens). Substitute: replaces one token with a different same-side affix.
// Both throw NoNegativePossibleError when the input admits no change.
std::vector<std::string> generate_negative(const std::vector<std::string>& seq, NegMode mode,
                                           const AffixInventory& inv, Rng& rng);

enum class Split : int { Train = 0, Dev = 1, Test = 2 };
const char* to_string(Split s);

struct MorphItem {
  std::vector<std::string> seq;
  int label = 1;  // +1 attested, -1 perturbed
  std::string word;
  Split split = Split::Train;
};

struct MorphDataset {
  std::vector<MorphItem> items;
  long skipped_negatives = 0;
  std::uint64_t seed = 0;
};

// Words are assigned to train/dev/test first; each positive's negatives
// inherit its word and split, so no word ever crosses a split boundary. The
// negative mode alternates permute/substitute draw by draw.
MorphDataset build_morph_dataset(const std::vector<AffixEntry>& entries,
                                 const AffixInventory& inv, int neg_per_pos,
                                 std::array<double, 3> ratios, std::uint64_t seed);

// Sequence presence features (single affixes and ordered pairs, boundary
// included) plus thresholded bigram counts over the padded token sequence.
class Featurizer {
 public:
  explicit Featurizer(const AffixInventory& inv);

  std::size_t dim() const { return preds_.size(); }
  const std::vector<std::string>& feature_names() const { return names_; }
  const Alphabet& alphabet() const { return alphabet_; }

  TruthVector featurize(const std::vector<std::string>& seq) const;  // unknown token throws
  FeatureMatrix featurize_all(const std::vector<MorphItem>& items) const;

 private:
  Alphabet alphabet_;
  std::vector<Predicate> preds_;
  std::vector<std::string> names_;
};

// (name, weight) pairs with the k largest |weight|, ties broken by index
std::vector<std::pair<std::string, double>> top_features(const LinearModel& m, std::size_t k);

struct Histogram {
  std::vector<double> edges;  // bins + 1 ascending edges
  std::vector<long> counts;
};

Histogram margin_histogram(const LinearModel& m, const DenseMatrix& X, const std::vector<int>& y,
                           int bins);

struct PipelineConfig {
  int neg_per_pos = 2;
  std::array<double, 3> ratios{0.8, 0.1, 0.1};
  std::uint64_t seed = 7;
  int min_stem = 3;
  LogRegConfig solver{0.5, 2000, 1e-8, 1e-4};
  int hist_bins = 20;
  std::size_t top_k = 15;
};

struct PipelineResult {
  MorphDataset dataset;
  LinearModel model;
  Metrics train, dev, test;
  bool has_dev = false, has_test = false;
  std::vector<std::pair<std::string, double>> top;
  Histogram hist;  // test margins (train margins when the test split is empty)
  std::vector<std::string> feature_names;
};

PipelineResult run_pipeline(const std::vector<AffixEntry>& entries, const AffixInventory& inv,
                            const PipelineConfig& cfg);

}  // namespace subreg::morph
