#include "wsd/ensemble.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

#include "wsd/rng.hpp"

namespace wsd {

std::vector<std::size_t> bootstrap_sample(std::size_t n, std::uint64_t seed, std::uint64_t replicate) {
  if (n == 0) throw std::invalid_argument("bootstrap_sample: n must be positive");
  auto rng = Rng::stream(seed, replicate);
  std::vector<std::size_t> out(n);
  for (auto& i : out) i = static_cast<std::size_t>(rng.below(n));
  return out;
}

SenseDistribution weighted_vote(std::span<const SenseDistribution> members) {
  if (members.empty()) throw std::invalid_argument("weighted_vote: no members");
  // Accumulate in sense order per member so the sum does not depend on
  // member order beyond floating-point commutativity of each addition.
  std::map<std::string, std::vector<double>> parts;
  for (const auto& m : members) {
    const auto norm = m.normalized();
    for (const auto& [sense, p] : norm.scores()) parts[sense].push_back(p);
  }
  SenseDistribution sum;
  for (auto& [sense, ps] : parts) {
    std::sort(ps.begin(), ps.end());
    double s = 0.0;
    for (double p : ps) s += p;
    sum.add(sense, s);
  }
  return sum.normalized();
}

std::string majority_vote(std::span<const std::string> labels, std::span<const SenseDistribution> dists) {
  if (labels.empty()) throw std::invalid_argument("majority_vote: no labels");
  std::map<std::string, std::size_t> counts;
  for (const auto& l : labels) ++counts[l];
  std::size_t top = 0;
  for (const auto& [_, c] : counts) top = std::max(top, c);
  std::vector<std::string> tied;
  for (const auto& [l, c] : counts) {
    if (c == top) tied.push_back(l);
  }
  if (tied.size() == 1 || dists.empty()) return tied.front();
  const auto summed = weighted_vote(dists);
  const std::string* best = &tied.front();
  for (const auto& l : tied) {
    if (summed.score(l) > summed.score(*best)) best = &l;
  }
  return *best;
}

std::string_view to_string(VoteMode m) { return m == VoteMode::weighted ? "weighted" : "majority"; }

Vote combine(std::span<const SenseDistribution> members, VoteMode mode) {
  if (members.empty()) throw std::invalid_argument("combine: no members");
  if (mode == VoteMode::weighted) {
    auto d = weighted_vote(members);
    auto label = d.argmax();
    return {std::move(label), std::move(d)};
  }
  std::vector<std::string> labels;
  labels.reserve(members.size());
  SenseDistribution fractions;
  for (const auto& m : members) {
    labels.push_back(m.argmax());
    fractions.add(labels.back(), 1.0 / static_cast<double>(members.size()));
  }
  return {majority_vote(labels, members), fractions};
}

BaggedEnsemble::BaggedEnsemble(std::vector<ClassifierPtr> members, std::uint64_t seed)
    : members_(std::move(members)), seed_(seed) {
  if (members_.empty()) throw std::invalid_argument("BaggedEnsemble: no members");
  for (const auto& m : members_) {
    if (!m || m->num_features() != members_.front()->num_features()) {
      throw std::invalid_argument("BaggedEnsemble: members disagree on vector length");
    }
  }
}

SenseDistribution BaggedEnsemble::predict(const BitVector& v) const {
  check_length(v);
  std::vector<SenseDistribution> dists;
  dists.reserve(members_.size());
  for (const auto& m : members_) dists.push_back(m->predict(v));
  return weighted_vote(dists);
}

std::shared_ptr<const BaggedEnsemble> bag(const Trainer& train, const TrainingSet& data, std::uint64_t seed,
                                          std::size_t replicates) {
  if (data.empty()) throw std::invalid_argument("bag: empty training set");
  if (replicates == 0) throw std::invalid_argument("bag: need at least one replicate");
  std::vector<ClassifierPtr> members;
  members.reserve(replicates);
  for (std::size_t r = 0; r < replicates; ++r) {
    const auto idx = bootstrap_sample(data.size(), seed, r);
    members.push_back(train(data.subset(idx)));
  }
  return std::make_shared<BaggedEnsemble>(std::move(members), seed);
}

VotingEnsemble::VotingEnsemble(std::vector<ClassifierPtr> members, VoteMode mode)
    : members_(std::move(members)), mode_(mode) {
  if (members_.empty()) throw std::invalid_argument("VotingEnsemble: no members");
  for (const auto& m : members_) {
    if (!m || m->num_features() != members_.front()->num_features()) {
      throw std::invalid_argument("VotingEnsemble: members disagree on vector length");
    }
  }
}

Vote VotingEnsemble::decide(const BitVector& v) const {
  check_length(v);
  std::vector<SenseDistribution> dists;
  dists.reserve(members_.size());
  for (const auto& m : members_) dists.push_back(m->predict(v));
  return combine(dists, mode_);
}

}  // namespace wsd
