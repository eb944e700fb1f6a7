#include <doctest.h>

#include <algorithm>
#include <set>

#include <subreg/predicates.hpp>
#include <subreg/rng.hpp>

#include "oracles.hpp"

using namespace subreg;

namespace {

// Occurrence-possibility oracle: a gram is feasible iff it occurs in the
// K-padding of some plain string (checked over all strings up to a length cap).
bool gram_occurs_somewhere(const Alphabet& a, const Str& g, int k_pad, int max_len) {
  for (int n = 0; n <= max_len; ++n)
    for (const Str& x : oracle::all_strings(static_cast<int>(a.size()), n))
      if (oracle::substring(pad(x, k_pad, a.boundary()), g)) return true;
  return false;
}

}  // namespace

TEST_SUITE("predicates") {

TEST_CASE("default pad width") {
  CHECK(default_pad_width(1) == 1);
  CHECK(default_pad_width(2) == 1);
  CHECK(default_pad_width(3) == 2);
  CHECK(default_pad_width(5) == 4);
}

TEST_CASE("SL2 over {a,b} matches the occurrence-possibility oracle") {
  Alphabet a({"a", "b"});
  PredicateParams params;
  params.k = 2;
  PredicateSet ps = build_predicate_set(a, ClassTag::SL, params);

  // brute force: enumerate (sigma+#)^2 and keep grams realizable under padding
  std::set<Str> feasible;
  for (const Str& g : oracle::all_strings(3, 2))
    if (gram_occurs_somewhere(a, g, default_pad_width(2), 6)) feasible.insert(g);

  std::set<Str> built;
  for (const Predicate& p : ps.preds) {
    REQUIRE(p.kind == PredKind::Substring);
    built.insert(p.gram);
  }
  CHECK(built == feasible);
  CHECK(ps.size() == 9);  // with K=1 every gram in {a,b,#}^2 is realizable ("##" by the empty string)
}

TEST_CASE("SL3 gram counts over two alphabets") {
  PredicateParams params;
  params.k = 3;
  CHECK(build_predicate_set(Alphabet({"a", "b"}), ClassTag::SL, params).size() == 23);
  CHECK(build_predicate_set(Alphabet({"a", "b", "c", "d"}), ClassTag::SL, params).size() == 109);
}

TEST_CASE("SP2 over four symbols has 25 predicates") {
  PredicateParams params;
  params.k = 2;
  PredicateSet ps = build_predicate_set(Alphabet({"a", "b", "c", "d"}), ClassTag::SP, params);
  CHECK(ps.size() == 25);
  for (const Predicate& p : ps.preds) CHECK(p.kind == PredKind::Subsequence);
}

TEST_CASE("PT m=1 over {a} has exactly subsequence a and subsequence #") {
  PredicateParams params;
  params.k = 1;
  PredicateSet ps = build_predicate_set(Alphabet({"a"}), ClassTag::PT, params);
  REQUIRE(ps.size() == 2);
  CHECK(ps.preds[0].kind == PredKind::Subsequence);
  CHECK(ps.preds[1].kind == PredKind::Subsequence);
  std::set<Str> grams{ps.preds[0].gram, ps.preds[1].gram};
  Alphabet a({"a"});
  CHECK(grams == std::set<Str>{a.parse("a"), a.parse("#")});
}

TEST_CASE("LT adds prefix and suffix indicators to the SL grams") {
  Alphabet a({"a", "b"});
  PredicateParams params;
  params.k = 2;
  PredicateSet sl = build_predicate_set(a, ClassTag::SL, params);
  PredicateSet lt = build_predicate_set(a, ClassTag::LT, params);
  long prefixes = 0, suffixes = 0, substrings = 0;
  for (const Predicate& p : lt.preds) {
    if (p.kind == PredKind::Prefix) ++prefixes;
    if (p.kind == PredKind::Suffix) ++suffixes;
    if (p.kind == PredKind::Substring) ++substrings;
    if (p.kind == PredKind::Prefix || p.kind == PredKind::Suffix)
      CHECK(p.gram.size() == 1);  // k-1
  }
  CHECK(substrings == static_cast<long>(sl.size()));
  CHECK(prefixes == 3);  // a, b, #
  CHECK(suffixes == 3);
}

TEST_CASE("LTT enumerates thresholds 1..tau per gram") {
  Alphabet a({"a", "b"});
  PredicateParams params;
  params.k = 1;
  params.tau = 3;
  PredicateSet ps = build_predicate_set(a, ClassTag::LTT, params);
  CHECK(ps.size() == 9);  // grams a,b,# x thresholds 1..3
  for (const Predicate& p : ps.preds) {
    CHECK(p.kind == PredKind::ThresholdCount);
    CHECK(p.threshold >= 1);
    CHECK(p.threshold <= 3);
  }
}

TEST_CASE("LTT per-gram threshold map overrides the uniform tau") {
  Alphabet a({"a", "b"});
  PredicateParams params;
  params.k = 1;
  params.tau = 1;
  params.tau_per_gram[a.parse("a")] = 3;
  PredicateSet ps = build_predicate_set(a, ClassTag::LTT, params);
  long on_a = 0;
  for (const Predicate& p : ps.preds)
    if (p.gram == a.parse("a")) ++on_a;
  CHECK(on_a == 3);
  CHECK(ps.size() == 5);  // a:3 + b:1 + #:1
}

TEST_CASE("TSL builds tier grams over the configured tier") {
  Alphabet a({"a", "b", "i"});
  PredicateParams params;
  params.k = 2;
  params.tiers = {{"a", "i"}};
  PredicateSet ps = build_predicate_set(a, ClassTag::TSL, params);
  CHECK(ps.size() == 9);  // (2 tier symbols + #)^2
  for (const Predicate& p : ps.preds) {
    CHECK(p.kind == PredKind::TierSubstring);
    CHECK(p.tier.members() == std::vector<Sym>{0, 2});
  }
}

TEST_CASE("build rejects unusable params") {
  Alphabet a({"a"});
  PredicateParams params;
  params.k = 0;
  CHECK_THROWS_AS(build_predicate_set(a, ClassTag::SL, params), ConfigError);
  PredicateParams tsl;
  tsl.k = 2;
  CHECK_THROWS_AS(build_predicate_set(a, ClassTag::TSL, tsl), ConfigError);  // no tier given
}

TEST_CASE("eval_predicate on the worked examples") {
  Alphabet a({"e", "g", "h", "l", "n", "t"});
  Predicate p;
  p.kind = PredKind::Substring;
  p.gram = a.parse("ngt");
  p.pad_width = 2;
  CHECK(eval_predicate(a, p, a.parse("length")));
  CHECK_FALSE(eval_predicate(a, p, a.parse("lentgh")));

  Alphabet ab({"a", "b", "i"});
  Predicate tier_p;
  tier_p.kind = PredKind::TierSubstring;
  tier_p.tier = Tier(ab, {"a", "i"});
  tier_p.gram = ab.parse("ai");
  tier_p.pad_width = 1;
  CHECK(eval_predicate(ab, tier_p, ab.parse("bbaibb")));

  Predicate cnt;
  cnt.kind = PredKind::ThresholdCount;
  cnt.gram = ab.parse("a");
  cnt.threshold = 2;
  cnt.pad_width = 1;
  CHECK(eval_predicate(ab, cnt, ab.parse("aba")));
  CHECK_FALSE(eval_predicate(ab, cnt, ab.parse("ab")));
}

TEST_CASE("prefix and suffix predicates see the padded string") {
  Alphabet a({"a", "b"});
  Predicate pre;
  pre.kind = PredKind::Prefix;
  pre.gram = a.parse("#a");
  pre.pad_width = 1;
  CHECK(eval_predicate(a, pre, a.parse("ab")));
  CHECK_FALSE(eval_predicate(a, pre, a.parse("ba")));

  Predicate suf;
  suf.kind = PredKind::Suffix;
  suf.gram = a.parse("b#");
  suf.pad_width = 1;
  CHECK(eval_predicate(a, suf, a.parse("ab")));
  CHECK_FALSE(eval_predicate(a, suf, a.parse("ba")));

  // probe longer than the padded string is simply false, not an error
  Predicate longp;
  longp.kind = PredKind::Prefix;
  longp.gram = a.parse("#aaaa");
  longp.pad_width = 1;
  CHECK_FALSE(eval_predicate(a, longp, a.parse("a")));
}

TEST_CASE("truth_vector worked example and determinism") {
  Alphabet a({"a", "b"});
  PredicateSet ps;
  ps.tag = ClassTag::SP;
  ps.params.k = 2;
  ps.alphabet = a;
  Predicate qab;
  qab.kind = PredKind::Subsequence;
  qab.gram = a.parse("ab");
  qab.pad_width = 1;
  Predicate qba = qab;
  qba.gram = a.parse("ba");
  ps.preds = {qab, qba};

  TruthVector tv = truth_vector(ps, a.parse("ab"));
  REQUIRE(tv.size() == 2);
  CHECK(tv[0] == 1);
  CHECK(tv[1] == 0);
  CHECK(truth_vector(ps, a.parse("ab")) == tv);

  // empty string: sigma-only grams are all false
  PredicateParams params;
  params.k = 2;
  PredicateSet sl = build_predicate_set(a, ClassTag::SL, params);
  TruthVector empty_tv = truth_vector(sl, Str{});
  for (std::size_t j = 0; j < sl.size(); ++j) {
    bool sigma_only = std::none_of(sl.preds[j].gram.begin(), sl.preds[j].gram.end(),
                                   [&](Sym s) { return a.is_boundary(s); });
    if (sigma_only) CHECK(empty_tv[j] == 0);
  }
}

TEST_CASE("stable ordering across rebuilds") {
  Alphabet a({"a", "b", "c"});
  PredicateParams params;
  params.k = 2;
  PredicateSet p1 = build_predicate_set(a, ClassTag::LT, params);
  PredicateSet p2 = build_predicate_set(a, ClassTag::LT, params);
  REQUIRE(p1.size() == p2.size());
  for (std::size_t i = 0; i < p1.size(); ++i) {
    CHECK(p1.preds[i].kind == p2.preds[i].kind);
    CHECK(p1.preds[i].gram == p2.preds[i].gram);
  }
  // and the order is sorted under the documented comparator
  CHECK(std::is_sorted(p1.preds.begin(), p1.preds.end(), Predicate::order_less));
}

TEST_CASE("subsequence bits are monotone under insertion") {
  Alphabet a({"a", "b"});
  PredicateParams params;
  params.k = 2;
  PredicateSet sp = build_predicate_set(a, ClassTag::SP, params);
  Rng rng(23);
  for (int trial = 0; trial < 200; ++trial) {
    Str x;
    for (std::uint64_t i = 0, n = rng.below(6); i < n; ++i)
      x.push_back(static_cast<Sym>(rng.below(2)));
    TruthVector before = truth_vector(sp, x);
    Str y = x;
    y.insert(y.begin() + static_cast<long>(rng.below(y.size() + 1)),
             static_cast<Sym>(rng.below(2)));
    TruthVector after = truth_vector(sp, y);
    for (std::size_t j = 0; j < sp.size(); ++j)
      if (before[j]) CHECK(after[j]);
  }
}

TEST_CASE("threshold monotonicity") {
  Alphabet a({"a", "b"});
  PredicateParams params;
  params.k = 2;
  params.tau = 3;
  PredicateSet ltt = build_predicate_set(a, ClassTag::LTT, params);
  Rng rng(29);
  for (int trial = 0; trial < 100; ++trial) {
    Str x;
    for (std::uint64_t i = 0, n = rng.below(8); i < n; ++i)
      x.push_back(static_cast<Sym>(rng.below(2)));
    TruthVector tv = truth_vector(ltt, x);
    for (std::size_t j = 0; j < ltt.size(); ++j) {
      const Predicate& p = ltt.preds[j];
      if (p.threshold < 2 || !tv[j]) continue;
      for (std::size_t i = 0; i < ltt.size(); ++i)
        if (ltt.preds[i].gram == p.gram && ltt.preds[i].threshold == p.threshold - 1)
          CHECK(tv[i]);
    }
  }
}

TEST_CASE("feature_matrix rows equal truth vectors") {
  Alphabet a({"a", "b", "c"});
  PredicateParams params;
  params.k = 2;
  PredicateSet ps = build_predicate_set(a, ClassTag::SL, params);

  std::vector<Str> xs = {a.parse("abc"), a.parse(""), a.parse("ccba")};
  FeatureMatrix m = feature_matrix(ps, xs);
  REQUIRE(m.rows == 3);
  REQUIRE(m.cols == ps.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    TruthVector tv = truth_vector(ps, xs[i]);
    for (std::size_t j = 0; j < ps.size(); ++j) CHECK(m.at(i, j) == tv[j]);
  }

  FeatureMatrix empty = feature_matrix(ps, {});
  CHECK(empty.rows == 0);
  CHECK(empty.cols == ps.size());
}

TEST_CASE("describe names kind, gram and threshold") {
  Alphabet a({"a", "b"});
  Predicate p;
  p.kind = PredKind::Substring;
  p.gram = a.parse("ab#");
  CHECK(p.describe(a) == "substr(ab#)");
  p.kind = PredKind::ThresholdCount;
  p.gram = a.parse("bb");
  p.threshold = 2;
  CHECK(p.describe(a) == "count(bb)>=2");
}

TEST_CASE("class tag round trip") {
  for (ClassTag t : {ClassTag::SL, ClassTag::SP, ClassTag::LT, ClassTag::PT, ClassTag::LTT,
                     ClassTag::TSL}) {
    auto back = class_tag_from_string(to_string(t));
    REQUIRE(back.has_value());
    CHECK(*back == t);
  }
  CHECK(class_tag_from_string("sl") == ClassTag::SL);
  CHECK_FALSE(class_tag_from_string("bogus").has_value());
}

}  // TEST_SUITE
