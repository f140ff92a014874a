#include <doctest.h>

#include <algorithm>
#include <set>
#include <sstream>

#include "support/fixtures.hpp"
#include "wsd/ensemble.hpp"

using namespace wsd;

namespace {

SenseDistribution dist(std::map<std::string, double> m) { return SenseDistribution(std::move(m)); }

}  // namespace

TEST_CASE("bootstrap: shape, range and determinism") {
  CHECK(bootstrap_sample(1, 7, 0) == std::vector<std::size_t>{0});
  CHECK_THROWS(bootstrap_sample(0, 7, 0));
  const auto a = bootstrap_sample(50, 7, 3);
  CHECK(a.size() == 50);
  CHECK(std::all_of(a.begin(), a.end(), [](std::size_t i) { return i < 50; }));
  CHECK(a == bootstrap_sample(50, 7, 3));
  CHECK(a != bootstrap_sample(50, 7, 4));
  CHECK(a != bootstrap_sample(50, 8, 3));
}

TEST_CASE("bootstrap: about 63.2% distinct rows") {
  const std::size_t n = 10000;
  for (std::uint64_t r = 0; r < 5; ++r) {
    const auto s = bootstrap_sample(n, 99, r);
    const std::set<std::size_t> distinct(s.begin(), s.end());
    CHECK(std::abs(static_cast<double>(distinct.size()) / n - 0.632) <= 0.02);
  }
}

TEST_CASE("weighted vote: sums normalized members") {
  const std::vector<SenseDistribution> ms = {dist({{"A", 0.6}, {"B", 0.4}}), dist({{"A", 0.3}, {"B", 0.7}})};
  const auto v = weighted_vote(ms);
  CHECK(v.argmax() == "B");
  CHECK(v.score("A") == doctest::Approx(0.9 / 2.0));
  CHECK(v.score("B") == doctest::Approx(1.1 / 2.0));

  // Unnormalized members count the same as their normalized form.
  const std::vector<SenseDistribution> scaled = {dist({{"A", 6}, {"B", 4}}), dist({{"A", 0.03}, {"B", 0.07}})};
  CHECK(weighted_vote(scaled).argmax() == "B");
  CHECK(weighted_vote(scaled).score("B") == doctest::Approx(0.55));

  CHECK_THROWS(weighted_vote(std::span<const SenseDistribution>{}));
}

TEST_CASE("weighted vote: member order does not matter") {
  Rng rng(3);
  for (int round = 0; round < 50; ++round) {
    std::vector<SenseDistribution> ms;
    const auto members = 1 + rng.below(6);
    for (std::uint64_t i = 0; i < members; ++i) {
      SenseDistribution d;
      for (const char* s : {"a", "b", "c"}) d.add(s, static_cast<double>(rng.below(1000)) / 7.0);
      ms.push_back(d);
    }
    const auto ref = weighted_vote(ms);
    rng.shuffle(std::span(ms));
    CHECK(weighted_vote(ms) == ref);
    CHECK(ref.total() == doctest::Approx(1.0));
  }
}

TEST_CASE("majority vote: counts, ties and degenerate input") {
  const std::vector<std::string> aab = {"A", "A", "B"};
  CHECK(majority_vote(aab) == "A");
  const std::vector<std::string> one = {"A"};
  CHECK(majority_vote(one) == "A");
  const std::vector<std::string> tie = {"B", "A"};
  CHECK(majority_vote(tie) == "A");
  const std::vector<SenseDistribution> leaning_b = {dist({{"B", 0.9}, {"A", 0.1}}), dist({{"A", 0.6}, {"B", 0.4}})};
  CHECK(majority_vote(tie, leaning_b) == "B");
  CHECK_THROWS(majority_vote(std::span<const std::string>{}));
}

TEST_CASE("combine: majority reports vote fractions") {
  const std::vector<SenseDistribution> ms = {dist({{"A", 0.9}, {"B", 0.1}}), dist({{"A", 0.8}, {"B", 0.2}}),
                                             dist({{"A", 0.1}, {"B", 0.9}})};
  const auto v = combine(ms, VoteMode::majority);
  CHECK(v.label == "A");
  CHECK(v.distribution.score("A") == doctest::Approx(2.0 / 3.0));
  CHECK(v.distribution.score("B") == doctest::Approx(1.0 / 3.0));
  const auto w = combine(ms, VoteMode::weighted);
  CHECK(w.label == "A");
  CHECK(w.distribution.score("A") == doctest::Approx(1.8 / 3.0));
}

TEST_CASE("bagging: replicates, determinism and single-class data") {
  Rng rng(4);
  const auto t = testing::random_training_set(rng, 40, 8, 2);
  const Trainer tree = [](const TrainingSet& d) -> ClassifierPtr { return train_decision_tree(d); };
  const auto a = bag(tree, t, 11);
  const auto b = bag(tree, t, 11);
  CHECK(a->members().size() == 10);
  for (std::size_t i = 0; i < 10; ++i) {
    std::ostringstream x, y;
    a->members()[i]->save(x);
    b->members()[i]->save(y);
    CHECK(x.str() == y.str());
  }
  CHECK(bag(tree, t, 11, 3)->members().size() == 3);
  CHECK_THROWS(bag(tree, t, 11, 0));

  const auto single = testing::random_training_set(rng, 12, 4, 1);
  const auto sb = bag(tree, single, 5);
  CHECK(sb->predict(BitVector(4)).argmax() == "s0");

  // Every member sees the full sense inventory even when its sample misses a class.
  const auto rare = TrainingSet::from_vectors(
      std::vector<FeatureVector>{{BitVector(1), std::string("x"), "0"}, {BitVector(1), std::string("y"), "1"},
                                 {BitVector(1), std::string("y"), "2"}},
      1);
  const auto rb = bag(tree, rare, 2, 20);
  for (const auto& m : rb->members()) CHECK(m->predict(BitVector(1)).size() == 2);
}

TEST_CASE("voting ensemble: majority and weighted modes") {
  const auto t = TrainingSet::from_vectors(
      std::vector<FeatureVector>{{BitVector(1), std::string("A"), "0"}, {BitVector(1), std::string("A"), "1"},
                                 {BitVector(1), std::string("B"), "2"}},
      1);
  const std::vector<ClassifierPtr> members = {train_majority(t), train_naive_bayes(t), train_knn(t, 3)};
  const VotingEnsemble major(members, VoteMode::majority);
  const auto v = major.decide(BitVector(1));
  CHECK(v.label == "A");
  CHECK(v.distribution.score("A") == doctest::Approx(1.0));
  CHECK(VotingEnsemble(members, VoteMode::weighted).predict(BitVector(1)).argmax() == "A");
  CHECK_THROWS(VotingEnsemble({}, VoteMode::weighted));
}
