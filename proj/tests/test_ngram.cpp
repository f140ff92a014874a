#include <doctest.h>

#include <cmath>
#include <sstream>

#include "support/fixtures.hpp"
#include "support/oracles.hpp"
#include "wsd/ngram.hpp"

using namespace wsd;
using wsd::testing::inst;

namespace {

std::vector<Instance> one(const std::string& text) { return {inst("x", "1", "s", text)}; }

std::uint64_t pair_count(const PairCounts& c, const std::string& a, const std::string& b) {
  auto it = c.pairs.find({a, b});
  return it == c.pairs.end() ? 0 : it->second;
}

}  // namespace

TEST_CASE("g2: independence is exactly zero") {
  CHECK(g_squared({4, 4, 4, 4}) == 0.0);
  CHECK(g_squared({1, 2, 3, 6}) == 0.0);
  CHECK(g_squared({0, 0, 5, 7}) == 0.0);
}

TEST_CASE("g2: perfect association") {
  CHECK(g_squared({10, 0, 0, 10}) == doctest::Approx(40.0 * std::log(2.0)).epsilon(1e-12));
  CHECK(std::abs(g_squared({10, 0, 0, 10}) - testing::g2_multiprecision(10, 0, 0, 10)) < 1e-12);
}

TEST_CASE("g2: empty table is an error") { CHECK_THROWS_AS(g_squared({0, 0, 0, 0}), std::domain_error); }

TEST_CASE("g2: agrees with arbitrary-precision evaluation") {
  Rng rng(2024);
  for (int i = 0; i < 300; ++i) {
    const std::uint64_t c[4] = {rng.below(10001), rng.below(10001), rng.below(10001), rng.below(10001)};
    if (c[0] + c[1] + c[2] + c[3] == 0) continue;
    const double got = g_squared({c[0], c[1], c[2], c[3]});
    CHECK(std::abs(got - testing::g2_multiprecision(c[0], c[1], c[2], c[3])) < 1e-9);
  }
}

TEST_CASE("g2: properties") {
  Rng rng(77);
  for (int i = 0; i < 500; ++i) {
    const std::uint64_t a = rng.below(200), b = rng.below(200), c = rng.below(200), d = rng.below(200);
    if (a + b + c + d == 0) continue;
    const double g = g_squared({a, b, c, d});
    CHECK(g >= 0.0);
    // Swapping both rows and both columns maps the table onto itself.
    CHECK(g_squared({d, c, b, a}) == doctest::Approx(g).epsilon(1e-12));
    // Transposition.
    CHECK(g_squared({a, c, b, d}) == doctest::Approx(g).epsilon(1e-12));
    const std::uint64_t k = 2 + rng.below(5);
    CHECK(g_squared({k * a, k * b, k * c, k * d}) == doctest::Approx(static_cast<double>(k) * g).epsilon(1e-9));
  }
}

TEST_CASE("contingency table from margins") {
  const auto t = ContingencyTable::from_margins(3, 5, 4, 20);
  CHECK(t == ContingencyTable{3, 2, 1, 14});
  CHECK(t.n1p() == 5);
  CHECK(t.np1() == 4);
  CHECK(t.npp() == 20);
  CHECK_THROWS(ContingencyTable::from_margins(6, 5, 4, 20));
  CHECK_THROWS(ContingencyTable::from_margins(1, 5, 4, 7));
}

TEST_CASE("unigram counts") {
  CHECK(count_unigrams({}, {}).empty());
  const std::vector<Instance> two = {inst("x", "1", "s", "rate [x] rate"), inst("x", "2", "s", "rate rate [x]")};
  CHECK(count_unigrams(two, {}).at("rate") == 4);
  StopList sl;
  sl.words = {"the"};
  const auto c = count_unigrams(one("the [x] rate"), sl);
  CHECK(c.count("the") == 0);
  CHECK(c.at("rate") == 1);
}

TEST_CASE("bigram counts: adjacency") {
  const auto c = count_bigrams(one("[a] b c"), {}, 0);
  CHECK(c.pairs.size() == 2);
  CHECK(pair_count(c, "a", "b") == 1);
  CHECK(pair_count(c, "b", "c") == 1);
  CHECK(c.total == 2);
}

TEST_CASE("bigram counts: one intervening token") {
  const auto c = count_bigrams(one("[a] x b"), {}, 1);
  CHECK(pair_count(c, "a", "b") == 1);
  CHECK(pair_count(c, "a", "x") == 1);
  CHECK(pair_count(c, "x", "b") == 1);
  CHECK(c.total == 3);
}

TEST_CASE("bigram counts: stop-listed pairs") {
  StopList sl;
  sl.words = {"of", "the"};
  const auto c = count_bigrams(one("line of the [x]"), sl, 0);
  CHECK(pair_count(c, "line", "of") == 1);  // one word stopped: kept
  CHECK(pair_count(c, "of", "the") == 0);   // both stopped: dropped
  CHECK(pair_count(c, "the", "x") == 1);
  CHECK(c.total == 3);                      // margins see every window
  CHECK(c.first.at("of") == 1);
}

TEST_CASE("bigram counts: windows never cross instances") {
  const std::vector<Instance> two = {inst("x", "1", "s", "a [b]"), inst("x", "2", "s", "[c] d")};
  const auto c = count_bigrams(two, {}, 2);
  CHECK(pair_count(c, "b", "c") == 0);
  CHECK(c.total == 2);
}

TEST_CASE("bigram counts: wider gaps contain narrower ones") {
  Rng rng(3);
  std::vector<Instance> data;
  for (int i = 0; i < 40; ++i) {
    std::string text;
    for (int t = 0; t < 8; ++t) text += "w" + std::to_string(rng.below(6)) + " ";
    data.push_back(inst("x", std::to_string(i), "s", text + "[t]"));
  }
  const auto g0 = count_bigrams(data, {}, 0);
  const auto g1 = count_bigrams(data, {}, 1);
  const auto g2 = count_bigrams(data, {}, 2);
  for (const auto& [p, n] : g0.pairs) CHECK(pair_count(g2, p.first, p.second) >= n);
  for (const auto& [p, n] : g1.pairs) CHECK(pair_count(g2, p.first, p.second) >= n);
  CHECK(g2.total >= g1.total);
}

TEST_CASE("bigram table construction uses window margins") {
  const auto c = count_bigrams(one("[a] b a b c"), {}, 0);
  // windows: ab ba ab bc
  const auto t = c.table("a", "b");
  CHECK(t.n11 == 2);
  CHECK(t.n1p() == 2);
  CHECK(t.np1() == 2);
  CHECK(t.npp() == 4);
}

TEST_CASE("co-occurrences: neighbors of the target") {
  const auto c = extract_cooccurrences(one("red [art] gallery"));
  CHECK(c.count("red", Side::left) == 1);
  CHECK(c.count("gallery", Side::right) == 1);
  CHECK(c.counts.size() == 2);

  const auto edge = extract_cooccurrences(one("[art] gallery"));
  CHECK(edge.counts.size() == 1);
  CHECK(edge.count("gallery", Side::right) == 1);

  const std::vector<Instance> three = {inst("x", "1", "s", "a fine [x]"), inst("x", "2", "s", "fine [x] b"),
                                       inst("x", "3", "s", "fine [x]")};
  CHECK(extract_cooccurrences(three).count("fine", Side::left) == 3);
}

TEST_CASE("co-occurrence tables treat the target as one symbol") {
  const std::vector<Instance> data = {inst("x", "1", "s", "fine [art] here"), inst("x", "2", "s", "fine [arts]"),
                                      inst("x", "3", "s", "[art] fine day")};
  // Adjacent windows: (fine,T) (T,here) | (fine,T) | (T,fine) (fine,day)
  const auto c = extract_cooccurrences(data);
  const auto left = c.table("fine", Side::left);
  CHECK(left.n11 == 2);
  CHECK(left.n1p() == 3);
  CHECK(left.np1() == 2);
  CHECK(left.npp() == 5);
  const auto right = c.table("fine", Side::right);
  CHECK(right.n11 == 1);
  CHECK(right.n1p() == 2);  // windows with the target first
  CHECK(right.np1() == 1);  // windows with "fine" second
  CHECK(right.npp() == 5);
}

TEST_CASE("selection: frequency and significance thresholds") {
  std::vector<Instance> data;
  for (int i = 0; i < 10; ++i) data.push_back(inst("x", "a" + std::to_string(i), "s", "[interest] rate"));
  for (int i = 0; i < 10; ++i) data.push_back(inst("x", "b" + std::to_string(i), "s", "[other] thing"));
  data.push_back(inst("x", "c", "s", "[once] only"));
  const auto counts = count_bigrams(data, {}, 0);
  CHECK(counts.table("interest", "rate") == ContingencyTable{10, 0, 0, 11});

  const auto fs = select_pairs(counts, FeatureKind::bigram, 2, g2::p01);
  std::vector<Feature> got(fs.features().begin(), fs.features().end());
  CHECK(std::find(got.begin(), got.end(), Feature::bigram("interest", "rate")) != got.end());
  CHECK(std::find(got.begin(), got.end(), Feature::bigram("once", "only")) == got.end());

  // A threshold of zero keeps every pair meeting the frequency rule.
  CHECK(select_pairs(counts, FeatureKind::bigram, 1, 0.0).size() == counts.pairs.size());
  CHECK(select_pairs(counts, FeatureKind::bigram, 2, 0.0).size() == 2);
}

TEST_CASE("selection: ordering is G² then frequency then feature order") {
  std::vector<Instance> data;
  Rng rng(9);
  for (int i = 0; i < 60; ++i) {
    std::string text;
    for (int t = 0; t < 6; ++t) text += "w" + std::to_string(rng.below(8)) + " ";
    data.push_back(inst("x", std::to_string(i), "s", text + "[t]"));
  }
  const auto fs = select_pairs(count_bigrams(data, {}, 1), FeatureKind::gapped_bigram, 1, 0.0);
  REQUIRE(fs.size() > 3);
  for (std::size_t i = 1; i < fs.size(); ++i) {
    const auto &a = fs.stats()[i - 1], &b = fs.stats()[i];
    const bool ordered = a.g2 > b.g2 || (a.g2 == b.g2 && (a.freq > b.freq || (a.freq == b.freq && fs[i - 1] < fs[i])));
    CHECK(ordered);
  }
  for (const auto& f : fs.features()) CHECK(f.max_gap == 1);
}

TEST_CASE("selection: raising thresholds never adds features") {
  Rng rng(21);
  std::vector<Instance> data;
  for (int i = 0; i < 80; ++i) {
    std::string text;
    for (int t = 0; t < 5; ++t) text += "w" + std::to_string(rng.below(10)) + " ";
    data.push_back(inst("x", std::to_string(i), "s", text + "[t] r" + std::to_string(rng.below(4))));
  }
  const auto counts = count_bigrams(data, {}, 0);
  const double g2s[] = {0.0, 1.0, g2::p10, g2::p01, g2::p001};
  for (std::size_t mf = 1; mf < 6; ++mf) {
    for (std::size_t gi = 0; gi + 1 < std::size(g2s); ++gi) {
      const auto loose = select_pairs(counts, FeatureKind::bigram, mf, g2s[gi]);
      const auto tight = select_pairs(counts, FeatureKind::bigram, mf, g2s[gi + 1]);
      const auto tighter = select_pairs(counts, FeatureKind::bigram, mf + 1, g2s[gi]);
      std::set<Feature> l(loose.features().begin(), loose.features().end());
      for (const auto& f : tight.features()) CHECK(l.count(f) == 1);
      for (const auto& f : tighter.features()) CHECK(l.count(f) == 1);
    }
  }
}

TEST_CASE("selection: unigrams ignore the significance threshold") {
  UnigramCounts c{{"a", 5}, {"b", 4}, {"c", 9}};
  const auto fs = select_unigrams(c, 5);
  REQUIRE(fs.size() == 2);
  CHECK(fs[0] == Feature::unigram("c"));
  CHECK(fs[1] == Feature::unigram("a"));
}

TEST_CASE("selection: co-occurrence stop-listing is opt-in") {
  std::vector<Instance> data;
  for (int i = 0; i < 6; ++i) data.push_back(inst("x", "a" + std::to_string(i), "s", "the [bank] river"));
  for (int i = 0; i < 6; ++i) data.push_back(inst("x", "b" + std::to_string(i), "s", "a loan [bank]"));
  StopList sl;
  sl.words = {"the"};
  const FeatureSpec spec{FeatureKind::cooccurrence, 2, 0.0, 0};
  const auto keep = select_features(data, spec, sl);
  const auto drop = select_features(data, spec, sl, SelectionOptions{true});
  std::set<Feature> k(keep.features().begin(), keep.features().end());
  std::set<Feature> d(drop.features().begin(), drop.features().end());
  CHECK(k.count(Feature::cooccurrence("the", Side::left)) == 1);
  CHECK(d.count(Feature::cooccurrence("the", Side::left)) == 0);
  CHECK(d.count(Feature::cooccurrence("loan", Side::left)) == 1);
}

TEST_CASE("feature set: duplicates are rejected and order defines positions") {
  FeatureSet fs;
  CHECK(fs.add(Feature::unigram("a")));
  CHECK(fs.add(Feature::bigram("a", "b")));
  CHECK(!fs.add(Feature::unigram("a")));
  CHECK(fs.size() == 2);
  FeatureSet more;
  more.add(Feature::bigram("a", "b"));
  more.add(Feature::cooccurrence("c", Side::right));
  fs.append(more);
  CHECK(fs.size() == 3);
  CHECK(fs[2] == Feature::cooccurrence("c", Side::right));
}

TEST_CASE("feature set: text round trip") {
  std::vector<Instance> data;
  for (int i = 0; i < 5; ++i) data.push_back(inst("x", std::to_string(i), "s", "big interest [rate] rose"));
  StopList sl;
  sl.words = {"the"};
  auto fs = select_features(data, {FeatureKind::gapped_bigram, 1, 0.0, 2}, sl);
  fs.append(select_features(data, {FeatureKind::cooccurrence, 1, 0.0, 0}, sl));
  fs.append(select_features(data, {FeatureKind::unigram, 1, 0.0, 0}, sl));
  REQUIRE(fs.selection().size() == 3);
  CHECK(fs.selection()[0].stoplist == stoplist_id(sl));
  std::ostringstream out;
  write_feature_set(fs, out);
  std::istringstream in(out.str());
  CHECK(read_feature_set(in) == fs);
  CHECK(out.str().find("gapped_bigram\tbig interest\t2\t") != std::string::npos);
  CHECK(out.str().find("cooccurrence\tinterest\tleft\t5\t") != std::string::npos);
}
