#include <doctest.h>

#include <algorithm>
#include <set>

#include <subreg/languages.hpp>

#include "oracles.hpp"

using namespace subreg;

namespace {

LanguageSpec sl_spec(const Alphabet& a, int k, const std::vector<std::string>& grams) {
  LanguageSpec s;
  s.tag = ClassTag::SL;
  s.alphabet = a;
  s.k = k;
  for (const std::string& g : grams) s.forbidden.push_back(a.parse(g));
  return s;
}

LanguageSpec sp_spec(const Alphabet& a, const std::vector<std::string>& seqs) {
  LanguageSpec s;
  s.tag = ClassTag::SP;
  s.alphabet = a;
  s.k = 2;
  for (const std::string& g : seqs) s.forbidden.push_back(a.parse(g));
  return s;
}

}  // namespace

TEST_SUITE("languages") {

TEST_CASE("SL membership worked example") {
  Alphabet a({"e", "g", "h", "l", "n", "t"});
  LanguageSpec spec = sl_spec(a, 3, {"ngt"});
  CHECK_FALSE(membership(spec, a.parse("length")));
  CHECK(membership(spec, a.parse("lent")));
}

TEST_CASE("SP membership worked example") {
  Alphabet a({"a", "b", "c", "d"});
  LanguageSpec spec = sp_spec(a, {"ac", "bd"});
  CHECK_FALSE(membership(spec, a.parse("abc")));  // a before c
  CHECK(membership(spec, a.parse("adb")));
}

TEST_CASE("LTT membership on the four-constraint setup") {
  LanguageSpec spec = default_ltt2_spec();
  const Alphabet& a = spec.alphabet;
  CHECK(membership(spec, a.parse("aab")));
  CHECK_FALSE(membership(spec, a.parse("bab")));   // does not begin with a
  CHECK_FALSE(membership(spec, a.parse("ab")));    // only one a
  CHECK_FALSE(membership(spec, a.parse("aabbbb")));  // bb occurs three times
  CHECK_FALSE(membership(spec, a.parse("aabc")));  // ends in c
  CHECK(membership(spec, a.parse("aabba")));       // exactly one bb is allowed
}

TEST_CASE("TSL membership projects onto the tier") {
  Alphabet a({"a", "b", "i"});
  LanguageSpec spec;
  spec.tag = ClassTag::TSL;
  spec.alphabet = a;
  spec.k = 2;
  spec.tier = Tier(a, {"a", "i"});
  spec.forbidden = {a.parse("ai")};
  CHECK_FALSE(membership(spec, a.parse("abbbi")));  // a...i on the tier
  CHECK(membership(spec, a.parse("ibbba")));
  CHECK(membership(spec, a.parse("bbb")));  // empty projection
}

TEST_CASE("LT membership is a conjunction of literals") {
  Alphabet a({"a", "b"});
  LanguageSpec spec;
  spec.tag = ClassTag::LT;
  spec.alphabet = a;
  spec.k = 2;
  Predicate has_ab;
  has_ab.kind = PredKind::Substring;
  has_ab.gram = a.parse("ab");
  has_ab.pad_width = 1;
  Predicate starts_b;
  starts_b.kind = PredKind::Prefix;
  starts_b.gram = a.parse("#b");
  starts_b.pad_width = 1;
  spec.lt_literals = {{has_ab, true}, {starts_b, false}};
  CHECK(membership(spec, a.parse("aab")));
  CHECK_FALSE(membership(spec, a.parse("bab")));  // starts with b
  CHECK_FALSE(membership(spec, a.parse("aa")));   // no ab
}

TEST_CASE("PT membership forbids short subsequences") {
  Alphabet a({"a", "b"});
  LanguageSpec spec;
  spec.tag = ClassTag::PT;
  spec.alphabet = a;
  spec.k = 2;
  spec.forbidden = {a.parse("aa")};
  CHECK_FALSE(membership(spec, a.parse("aba")));
  CHECK(membership(spec, a.parse("abb")));
}

TEST_CASE("validate rejects malformed specs") {
  Alphabet a({"a", "b"});
  LanguageSpec bad = sl_spec(a, 3, {"ab"});  // gram length != k
  CHECK_THROWS_AS(validate(bad), ConfigError);

  LanguageSpec ltt;
  ltt.tag = ClassTag::LTT;
  ltt.alphabet = a;
  ltt.k = 2;
  CHECK_THROWS_AS(validate(ltt), ConfigError);  // no constraints
  ltt.ltt_constraints.push_back({a.parse("a"), true, -1});
  CHECK_THROWS_AS(validate(ltt), ConfigError);  // negative bound

  LanguageSpec tsl;
  tsl.tag = ClassTag::TSL;
  tsl.alphabet = a;
  tsl.k = 2;
  tsl.tier = Tier(a, {"a"});
  tsl.forbidden = {a.parse("ab")};  // b not on the tier
  CHECK_THROWS_AS(validate(tsl), ConfigError);
}

TEST_CASE("fingerprint is stable and descriptive") {
  CHECK(default_sl3_spec().fingerprint() ==
        "SL(k=3,sigma=[a,b,c,d],forbidden=[abc,bba,ca#])");
  CHECK(default_sl3_spec().fingerprint() == default_sl3_spec().fingerprint());
}

TEST_CASE("sampler soundness across classes") {
  Rng rng(99);
  std::vector<LanguageSpec> specs = {default_sl3_spec(), default_sp2_spec(),
                                     default_ltt2_spec()};

  Alphabet abi({"a", "b", "i"});
  LanguageSpec tsl;
  tsl.tag = ClassTag::TSL;
  tsl.alphabet = abi;
  tsl.k = 2;
  tsl.tier = Tier(abi, {"a", "i"});
  tsl.forbidden = {abi.parse("aa"), abi.parse("ii")};
  specs.push_back(tsl);

  Alphabet ab({"a", "b"});
  LanguageSpec pt;
  pt.tag = ClassTag::PT;
  pt.alphabet = ab;
  pt.k = 2;
  pt.forbidden = {ab.parse("aa")};
  specs.push_back(pt);

  LanguageSpec lt;
  lt.tag = ClassTag::LT;
  lt.alphabet = ab;
  lt.k = 2;
  Predicate has_ab;
  has_ab.kind = PredKind::Substring;
  has_ab.gram = ab.parse("ab");
  has_ab.pad_width = 1;
  lt.lt_literals = {{has_ab, true}};
  specs.push_back(lt);

  for (const LanguageSpec& spec : specs) {
    LenRange len = default_len_range(spec.tag);
    for (int i = 0; i < 200; ++i) {
      Str p = sample_positive(spec, len, rng);
      CHECK(membership(spec, p));
      CHECK(static_cast<int>(p.size()) >= len.lo);
      CHECK(static_cast<int>(p.size()) <= len.hi);
      Str n = sample_negative(spec, len, rng);
      CHECK_FALSE(membership(spec, n));
      CHECK(static_cast<int>(n.size()) >= len.lo);
      CHECK(static_cast<int>(n.size()) <= len.hi);
    }
  }
}

TEST_CASE("SL negatives include boundary-gram violations") {
  LanguageSpec spec = default_sl3_spec();  // forbidden includes ca#
  const Alphabet& a = spec.alphabet;
  Rng rng(5);
  int boundary_hits = 0;
  for (int i = 0; i < 300; ++i) {
    Str n = sample_negative(spec, {5, 15}, rng);
    Str padded = pad(n, spec.pad_width(), a.boundary());
    if (contains_substring(padded, a.parse("ca#"))) ++boundary_hits;
  }
  CHECK(boundary_hits > 0);
}

TEST_CASE("TSL equals SL on the tier projection, exhaustively") {
  Alphabet a({"a", "b", "i"});
  Tier tier(a, {"a", "i"});
  std::vector<Str> forb = {a.parse("ai"), a.parse("a#")};

  LanguageSpec tsl;
  tsl.tag = ClassTag::TSL;
  tsl.alphabet = a;
  tsl.k = 2;
  tsl.tier = tier;
  tsl.forbidden = forb;

  LanguageSpec sl;
  sl.tag = ClassTag::SL;
  sl.alphabet = a;
  sl.k = 2;
  sl.forbidden = forb;

  for (const Str& x : oracle::all_strings_upto(3, 5)) {
    // strip: the plain projection of x (boundary cannot occur in plain x)
    Str proj;
    for (Sym s : x)
      if (tier.contains(s)) proj.push_back(s);
    CHECK(membership(tsl, x) == membership(sl, proj));
  }
}

TEST_CASE("generate_dataset labels agree with the oracle") {
  LanguageSpec spec = default_sl3_spec();
  LabeledDataset d = generate_dataset(spec, 100, 100, {5, 15}, 7);
  REQUIRE(d.items.size() == 200);
  long pos = 0;
  for (const LabeledItem& it : d.items) {
    CHECK((it.label == 1 || it.label == -1));
    CHECK(membership(spec, it.str) == (it.label == 1));
    if (it.label == 1) ++pos;
  }
  CHECK(pos == 100);
  CHECK(d.noise_rate == 0.0);
  CHECK(d.spec_fingerprint == spec.fingerprint());
}

TEST_CASE("generate_dataset is deterministic and shuffled") {
  LanguageSpec spec = default_sp2_spec();
  LabeledDataset d1 = generate_dataset(spec, 50, 50, {6, 18}, 11);
  LabeledDataset d2 = generate_dataset(spec, 50, 50, {6, 18}, 11);
  REQUIRE(d1.items.size() == d2.items.size());
  for (std::size_t i = 0; i < d1.items.size(); ++i) {
    CHECK(d1.items[i].str == d2.items[i].str);
    CHECK(d1.items[i].label == d2.items[i].label);
  }
  // not all positives first: the shuffle interleaves labels
  bool interleaved = false;
  for (std::size_t i = 0; i + 1 < d1.items.size(); ++i)
    if (d1.items[i].label == -1 && d1.items[i + 1].label == 1) interleaved = true;
  CHECK(interleaved);

  LabeledDataset other = generate_dataset(spec, 50, 50, {6, 18}, 12);
  bool different = false;
  for (std::size_t i = 0; i < d1.items.size(); ++i)
    if (other.items[i].str != d1.items[i].str) different = true;
  CHECK(different);

  CHECK(generate_dataset(spec, 0, 0, {6, 18}, 1).items.empty());
}

TEST_CASE("flip_labels") {
  LanguageSpec spec = default_sl3_spec();
  LabeledDataset d = generate_dataset(spec, 1000, 1000, {5, 15}, 3);

  LabeledDataset same = flip_labels(d, 0.0, 21);
  for (std::size_t i = 0; i < d.items.size(); ++i)
    CHECK(same.items[i].label == d.items[i].label);

  LabeledDataset all = flip_labels(d, 1.0, 21);
  for (std::size_t i = 0; i < d.items.size(); ++i) {
    CHECK(all.items[i].label == -d.items[i].label);
    CHECK(all.items[i].source == Provenance::Flipped);
  }
  CHECK(all.noise_rate == 1.0);

  // binomial sanity: 2000 items at rate 0.1, 3 sigma = ~40
  LabeledDataset some = flip_labels(d, 0.1, 21);
  long flips = 0;
  for (std::size_t i = 0; i < d.items.size(); ++i)
    if (some.items[i].label != d.items[i].label) ++flips;
  CHECK(flips > 200 - 41);
  CHECK(flips < 200 + 41);

  CHECK_THROWS_AS(flip_labels(d, 1.5, 1), ConfigError);
}

TEST_CASE("sampler exhaustion is an honest error") {
  Alphabet a({"a"});
  // only the empty string avoids both grams, so positives in [1,3] cannot exist
  LanguageSpec spec = sl_spec(a, 2, {"aa", "a#"});
  Rng rng(1);
  CHECK_THROWS_AS(sample_positive(spec, {1, 3}, rng), SamplerExhaustedError);

  // a spec with no forbidden grams has no negatives at all
  Alphabet ab({"a", "b"});
  LanguageSpec empty = sl_spec(ab, 2, {});
  CHECK_THROWS_AS(sample_negative(empty, {1, 3}, rng), SamplerExhaustedError);
}

TEST_CASE("length range validation") {
  LanguageSpec spec = default_sl3_spec();
  Rng rng(1);
  CHECK_THROWS_AS(sample_positive(spec, {5, 4}, rng), ConfigError);
  CHECK_THROWS_AS(sample_positive(spec, {-1, 4}, rng), ConfigError);
  CHECK_THROWS_AS(generate_dataset(spec, -1, 0, {5, 15}, 1), ConfigError);
}

TEST_CASE("default specs validate and expose the documented setups") {
  LanguageSpec sl = default_sl3_spec();
  CHECK(sl.tag == ClassTag::SL);
  CHECK(sl.k == 3);
  CHECK(sl.alphabet.size() == 4);
  CHECK(sl.forbidden.size() == 3);

  LanguageSpec sp = default_sp2_spec();
  CHECK(sp.tag == ClassTag::SP);
  CHECK(sp.alphabet.size() == 4);
  CHECK(sp.forbidden.size() == 2);  // two forbidden pairs

  LanguageSpec ltt = default_ltt2_spec();
  CHECK(ltt.tag == ClassTag::LTT);
  CHECK(ltt.ltt_constraints.size() == 4);

  CHECK(default_len_range(ClassTag::SP).lo == 6);
  CHECK(default_len_range(ClassTag::SP).hi == 18);
  CHECK(default_len_range(ClassTag::SL).lo == 5);
  CHECK(default_len_range(ClassTag::SL).hi == 15);
}

TEST_CASE("deciding and presence predicate sets") {
  CHECK(deciding_predicates(default_sl3_spec()).size() == 109);
  CHECK(deciding_predicates(default_sp2_spec()).size() == 25);
  PredicateSet ltt = deciding_predicates(default_ltt2_spec());
  CHECK(ltt.size() == 40);  // 20 grams x thresholds {1,2}
  PredicateSet pres = presence_predicates(default_ltt2_spec());
  CHECK(pres.size() == 20);
  for (const Predicate& p : pres.preds) CHECK(p.threshold == 1);

  // the deciding set must contain every constraint's observing feature
  for (const LttConstraint& c : default_ltt2_spec().ltt_constraints) {
    int want = c.at_least ? c.bound : c.bound + 1;
    bool found = false;
    for (const Predicate& p : ltt.preds)
      if (p.gram == c.gram && p.threshold == want) found = true;
    CHECK(found);
  }
}

}  // TEST_SUITE
