#pragma once

// JSON (de)serialization for every artifact the CLI reads or writes. Doubles
// go through nlohmann::json, whose dump uses shortest-round-trip formatting,
// so weights reload to exactly the trained values.

#include <string>

#include <json.hpp>

#include "subreg/experiments.hpp"
#include "subreg/languages.hpp"
#include "subreg/learners.hpp"
#include "subreg/minterm.hpp"
#include "subreg/morphology.hpp"

namespace subreg {

using Json = nlohmann::json;

Json alphabet_to_json(const Alphabet& a);
Alphabet alphabet_from_json(const Json& j);

Json predicate_to_json(const Predicate& p, const Alphabet& a);
Predicate predicate_from_json(const Json& j, const Alphabet& a);

Json predicate_set_to_json(const PredicateSet& ps);
PredicateSet predicate_set_from_json(const Json& j);

Json language_spec_to_json(const LanguageSpec& spec);
LanguageSpec language_spec_from_json(const Json& j);

// Model artifact: the linear model plus how it was trained and on what.
struct ModelFile {
  LinearModel model;
  std::string learner = "logreg";
  LogRegConfig solver;
  std::string dataset_fingerprint;
};

Json model_to_json(const ModelFile& m);
ModelFile model_from_json(const Json& j);

Json separator_to_json(const Separator& s);
Separator separator_from_json(const Json& j);

Json accept_set_to_json(const AcceptSet& s);
AcceptSet accept_set_from_json(const Json& j);

Json witness_to_json(const Witness& w);

Json inventory_to_json(const morph::AffixInventory& inv);
morph::AffixInventory inventory_from_json(const Json& j);

// Datasets are JSON lines: a meta record first (alphabet, seed, noise rate,
// fingerprint), then one record per item.
struct DatasetFile {
  Alphabet alphabet;
  LabeledDataset data;
};

void save_dataset_jsonl(const DatasetFile& d, const std::string& path);
DatasetFile load_dataset_jsonl(const std::string& path);

std::string morph_dataset_jsonl(const morph::MorphDataset& d);

Json metrics_to_json(const Metrics& m);

// small file helpers, all throwing IoError with the path on failure
void save_text(const std::string& path, const std::string& text);
std::string load_text(const std::string& path);
void save_json(const std::string& path, const Json& j);
Json load_json(const std::string& path);

}  // namespace subreg
