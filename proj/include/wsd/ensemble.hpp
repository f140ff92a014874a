#pragma once

// Bagging and vote combination.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "wsd/learners.hpp"

namespace wsd {

/// n draws from [0, n) with replacement, determined by (seed, replicate).
/// Throws on n == 0.
std::vector<std::size_t> bootstrap_sample(std::size_t n, std::uint64_t seed, std::uint64_t replicate);

/// Sums the normalized member distributions and renormalizes. Senses
/// missing from a member get nothing from it. Throws on empty input.
SenseDistribution weighted_vote(std::span<const SenseDistribution> members);

/// Most frequent label; ties go to the label with the larger summed
/// (normalized) member distribution, then to the smaller label. `dists`
/// may be empty, in which case ties fall straight to the label order.
std::string majority_vote(std::span<const std::string> labels, std::span<const SenseDistribution> dists = {});

enum class VoteMode { weighted, majority };

std::string_view to_string(VoteMode m);

struct Vote {
  std::string label;
  SenseDistribution distribution;  // weighted: the vote; majority: vote fractions
};

Vote combine(std::span<const SenseDistribution> members, VoteMode mode);

using Trainer = std::function<ClassifierPtr(const TrainingSet&)>;

class BaggedEnsemble final : public Classifier {
public:
  BaggedEnsemble(std::vector<ClassifierPtr> members, std::uint64_t seed);

  std::string_view kind() const override { return "bagged"; }
  std::size_t num_features() const override { return members_.front()->num_features(); }
  /// Weighted vote of the members.
  SenseDistribution predict(const BitVector& v) const override;
  void save(std::ostream& out) const override;

  const std::vector<ClassifierPtr>& members() const { return members_; }
  std::uint64_t seed() const { return seed_; }

private:
  std::vector<ClassifierPtr> members_;
  std::uint64_t seed_;
};

/// Member i is trained on bootstrap_sample(|data|, seed, i).
std::shared_ptr<const BaggedEnsemble> bag(const Trainer& train, const TrainingSet& data, std::uint64_t seed,
                                          std::size_t replicates = 10);

/// Heterogeneous members over the same vectors.
class VotingEnsemble final : public Classifier {
public:
  VotingEnsemble(std::vector<ClassifierPtr> members, VoteMode mode);

  std::string_view kind() const override { return "vote"; }
  std::size_t num_features() const override { return members_.front()->num_features(); }
  SenseDistribution predict(const BitVector& v) const override { return decide(v).distribution; }
  Vote decide(const BitVector& v) const;
  void save(std::ostream& out) const override;

  const std::vector<ClassifierPtr>& members() const { return members_; }
  VoteMode mode() const { return mode_; }

private:
  std::vector<ClassifierPtr> members_;
  VoteMode mode_;
};

}  // namespace wsd
