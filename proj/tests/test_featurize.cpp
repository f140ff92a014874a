#include <doctest.h>

#include <sstream>

#include "support/fixtures.hpp"
#include "wsd/featurize.hpp"

using namespace wsd;
using wsd::testing::inst;

namespace {

FeatureSet set_of(std::initializer_list<Feature> fs) {
  FeatureSet out;
  for (const auto& f : fs) out.add(f);
  return out;
}

}  // namespace

TEST_CASE("featurize: presence of each feature kind") {
  const auto fs = set_of({Feature::bigram("interest", "rate"), Feature::unigram("bank"), Feature::unigram("absent"),
                          Feature::cooccurrence("the", Side::left), Feature::cooccurrence("rose", Side::right),
                          Feature::cooccurrence("interest", Side::right)});
  const auto v = featurize(inst("x", "1", "s", "the [interest] rate rose at the bank"), fs);
  CHECK(v.bits.size() == fs.size());
  CHECK(v.bits.test(0));
  CHECK(v.bits.test(1));
  CHECK(!v.bits.test(2));
  CHECK(v.bits.test(3));
  CHECK(!v.bits.test(4));  // "rose" is two to the right of the target
  CHECK(!v.bits.test(5));
  CHECK(v.label == std::optional<std::string>("s"));
  CHECK(v.instance_id == "1");
}

TEST_CASE("featurize: bigram order matters") {
  const auto fs = set_of({Feature::bigram("rate", "interest")});
  CHECK(!featurize(inst("x", "1", "s", "[interest] rate"), fs).bits.test(0));
}

TEST_CASE("featurize: gap limit of two") {
  const auto fs = set_of({Feature::gapped("a", "b", 2)});
  CHECK(featurize(inst("x", "1", "s", "[a] x y b"), fs).bits.test(0));
  CHECK(!featurize(inst("x", "1", "s", "[a] x y z b"), fs).bits.test(0));
  CHECK(featurize(inst("x", "1", "s", "[a] b"), fs).bits.test(0));

  const auto narrow = set_of({Feature::gapped("a", "b", 1)});
  CHECK(!featurize(inst("x", "1", "s", "[a] x y b"), narrow).bits.test(0));
  CHECK(featurize(inst("x", "1", "s", "[a] x b"), narrow).bits.test(0));
}

TEST_CASE("featurize: the first gold sense is the training label") {
  auto in = inst("x", "1", "b", "[w]");
  in.gold_senses.push_back("a");
  const auto fs = set_of({Feature::unigram("w")});
  CHECK(featurize(in, fs).label == std::optional<std::string>("b"));
  CHECK(!Featurizer(fs)(in, false).label.has_value());
}

TEST_CASE("featurize: no matching feature gives the zero vector") {
  const auto fs = set_of({Feature::unigram("q"), Feature::bigram("q", "r")});
  CHECK(featurize(inst("x", "1", "s", "[w] z"), fs).bits.none());
}

TEST_CASE("featurize: empty feature set is rejected") {
  CHECK_THROWS_AS(featurize(inst("x", "1", "s", "[w]"), FeatureSet{}), std::invalid_argument);
}

TEST_CASE("featurize: appending features keeps existing bits") {
  Rng rng(4);
  std::vector<Feature> pool;
  for (int i = 0; i < 6; ++i) {
    pool.push_back(Feature::unigram("w" + std::to_string(i)));
    pool.push_back(Feature::bigram("w" + std::to_string(i), "w" + std::to_string((i + 1) % 6)));
    pool.push_back(Feature::cooccurrence("w" + std::to_string(i), i % 2 ? Side::left : Side::right));
    pool.push_back(Feature::gapped("w" + std::to_string(i), "w" + std::to_string((i + 2) % 6), 2));
  }
  for (int round = 0; round < 50; ++round) {
    std::string text;
    for (int t = 0; t < 7; ++t) text += "w" + std::to_string(rng.below(6)) + " ";
    text += "[t]";
    for (int t = 0; t < 3; ++t) text += " w" + std::to_string(rng.below(6));
    const auto in = inst("x", "1", "s", text);
    FeatureSet fs;
    BitVector prev;
    for (const auto& f : pool) {
      fs.add(f);
      const auto v = featurize(in, fs);
      for (std::size_t i = 0; i < prev.size(); ++i) CHECK(v.bits.test(i) == prev.test(i));
      CHECK(v == featurize(in, fs));
      prev = v.bits;
    }
  }
}

TEST_CASE("featurize: datasets keep order and test vectors carry no label") {
  LexeltDataset ds;
  ds.lexelt = "x";
  ds.train = {inst("x", "1", "a", "p [w]"), inst("x", "2", "b", "[w] q")};
  const auto fs = set_of({Feature::unigram("p"), Feature::unigram("q")});
  auto out = featurize_dataset(ds, fs);
  CHECK(out.train.size() == 2);
  CHECK(out.test.empty());
  CHECK(out.train[1].instance_id == "2");
  ds.test = {inst("x", "3", "a", "[w] p")};
  out = featurize_dataset(ds, fs);
  REQUIRE(out.test.size() == 1);
  CHECK(!out.test[0].label.has_value());
  CHECK(out.test[0].bits.test(0));
}

TEST_CASE("featurize: ARFF dump") {
  const auto fs = set_of({Feature::unigram("p"), Feature::cooccurrence("q", Side::left)});
  const std::vector<FeatureVector> vs = {featurize(inst("x", "1", "a", "p [w]"), fs),
                                         featurize(inst("x", "2", "b", "q [w]"), fs)};
  const std::vector<std::string> senses = {"a", "b"};
  std::ostringstream out;
  write_arff(out, "x", fs, vs, senses);
  const auto text = out.str();
  CHECK(text.find("@relation") != std::string::npos);
  CHECK(text.find("1,0,'a'") != std::string::npos);
  CHECK(text.find("0,1,'b'") != std::string::npos);
  CHECK(describe(Feature::cooccurrence("q", Side::left)) == "cooc:left:q");
}
