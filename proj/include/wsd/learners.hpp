#pragma once

// Supervised learners over binary feature vectors. Every model predicts a
// SenseDistribution so that heterogeneous models can be combined by vote.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "wsd/bitvec.hpp"
#include "wsd/featurize.hpp"

namespace wsd {

/// Non-negative scores per sense. argmax() takes the highest score and
/// breaks ties toward the lexicographically smallest sense; every
/// component uses this rule.
class SenseDistribution {
public:
  SenseDistribution() = default;
  explicit SenseDistribution(std::map<std::string, double> scores);

  /// Adds to the score of `sense`. Throws on negative or non-finite values.
  void add(const std::string& sense, double score);

  const std::map<std::string, double>& scores() const { return scores_; }
  double score(const std::string& sense) const;
  std::size_t size() const { return scores_.size(); }
  bool empty() const { return scores_.empty(); }
  double total() const;

  /// Scores divided by their sum; a zero-mass distribution becomes uniform
  /// over its entries.
  SenseDistribution normalized() const;

  /// Throws std::logic_error when empty.
  const std::string& argmax() const;

  bool operator==(const SenseDistribution&) const = default;

private:
  std::map<std::string, double> scores_;
};

/// Labeled training vectors with labels mapped to indices into a sorted
/// sense inventory. Bootstrap subsets keep the full inventory.
struct TrainingSet {
  std::size_t num_features = 0;
  std::vector<BitVector> rows;
  std::vector<std::uint32_t> labels;
  std::vector<std::string> senses;

  std::size_t size() const { return rows.size(); }
  bool empty() const { return rows.empty(); }
  std::vector<std::size_t> class_counts() const;

  /// Throws when a vector has no label or the wrong length.
  static TrainingSet from_vectors(std::span<const FeatureVector> vectors, std::size_t num_features);
  /// Rows at `indices`, repeats allowed.
  TrainingSet subset(std::span<const std::size_t> indices) const;
};

class Classifier {
public:
  virtual ~Classifier() = default;

  virtual std::string_view kind() const = 0;
  virtual std::size_t num_features() const = 0;
  /// Throws std::invalid_argument when v.size() != num_features().
  virtual SenseDistribution predict(const BitVector& v) const = 0;
  virtual void save(std::ostream& out) const = 0;

protected:
  void check_length(const BitVector& v) const;
};

using ClassifierPtr = std::shared_ptr<const Classifier>;

// --- Naive Bayes -----------------------------------------------------------

/// Multivariate Bernoulli Naive Bayes with add-one smoothing:
/// prior(s) = (n_s + 1) / (N + |S|), P(f=1|s) = (n_{f,s} + 1) / (n_s + 2).
class NaiveBayesModel final : public Classifier {
public:
  NaiveBayesModel(std::vector<std::string> senses, std::vector<std::uint64_t> class_counts,
                  std::vector<std::vector<std::uint64_t>> feature_counts, std::size_t num_features);

  std::string_view kind() const override { return "naive_bayes"; }
  std::size_t num_features() const override { return num_features_; }
  SenseDistribution predict(const BitVector& v) const override;
  void save(std::ostream& out) const override;

  const std::vector<std::string>& senses() const { return senses_; }
  double prior(std::size_t sense) const;
  double p_one(std::size_t feature, std::size_t sense) const;
  double p_zero(std::size_t feature, std::size_t sense) const { return 1.0 - p_one(feature, sense); }

  /// Unnormalized log scores, in sense order.
  std::vector<double> log_scores(const BitVector& v) const;

private:
  std::vector<std::string> senses_;
  std::vector<std::uint64_t> class_counts_;
  std::vector<std::vector<std::uint64_t>> feature_counts_;  // [sense][feature] bit=1 counts
  std::size_t num_features_ = 0;
  std::uint64_t total_ = 0;
  // log prior + Σ_f log P(0|s), and per-feature log P(1|s) - log P(0|s).
  std::vector<double> base_;
  std::vector<std::vector<double>> delta_;
};

std::shared_ptr<const NaiveBayesModel> train_naive_bayes(const TrainingSet& train);

// --- Decision tree ---------------------------------------------------------

struct TreeConfig {
  double confidence_factor = 0.25;
  std::size_t min_leaf = 2;  // both branches of a split need this many rows
  bool prune = true;

  bool operator==(const TreeConfig&) const = default;
};

/// Binary-feature C4.5 tree: gain-ratio splits grown until the training
/// data is fit, then error-based pessimistic pruning. Leaves predict
/// Laplace-corrected class counts.
class DecisionTreeModel final : public Classifier {
public:
  struct Node {
    std::int32_t feature = -1;  // -1 for a leaf
    std::uint32_t child[2] = {0, 0};  // indexed by the feature's bit
    std::vector<std::uint64_t> counts;  // training rows per sense
  };

  DecisionTreeModel(std::vector<std::string> senses, std::vector<Node> nodes, std::size_t num_features,
                    TreeConfig config);

  std::string_view kind() const override { return "decision_tree"; }
  std::size_t num_features() const override { return num_features_; }
  SenseDistribution predict(const BitVector& v) const override;
  void save(std::ostream& out) const override;

  const std::vector<std::string>& senses() const { return senses_; }
  const std::vector<Node>& nodes() const { return nodes_; }
  const TreeConfig& config() const { return config_; }
  std::size_t depth() const;
  std::size_t leaf_count() const;

private:
  std::vector<std::string> senses_;
  std::vector<Node> nodes_;  // nodes_[0] is the root
  std::size_t num_features_ = 0;
  TreeConfig config_;
};

std::shared_ptr<const DecisionTreeModel> train_decision_tree(const TrainingSet& train, const TreeConfig& config = {});

/// Upper confidence bound on the error count of a leaf with `n` rows and
/// `errors` misclassified, minus `errors` (C4.5's AddErrs).
double pessimistic_extra_errors(double n, double errors, double confidence_factor);

// --- Decision stump --------------------------------------------------------

class DecisionStumpModel final : public Classifier {
public:
  DecisionStumpModel(std::vector<std::string> senses, std::optional<std::size_t> feature,
                     std::vector<std::uint64_t> branch0, std::vector<std::uint64_t> branch1,
                     std::vector<std::uint64_t> overall, std::size_t num_features);

  std::string_view kind() const override { return "decision_stump"; }
  std::size_t num_features() const override { return num_features_; }
  SenseDistribution predict(const BitVector& v) const override;
  void save(std::ostream& out) const override;

  std::optional<std::size_t> feature() const { return feature_; }

private:
  std::vector<std::string> senses_;
  std::optional<std::size_t> feature_;
  std::vector<std::uint64_t> branch_[2];
  std::vector<std::uint64_t> overall_;
  std::size_t num_features_ = 0;
};

/// Root split chosen exactly as train_decision_tree chooses it; without a
/// split of positive gain the stump always predicts the class prior.
std::shared_ptr<const DecisionStumpModel> train_decision_stump(const TrainingSet& train, std::size_t min_leaf = 2);

// --- Nearest neighbor ------------------------------------------------------

/// k-nearest-neighbor over Hamming distance. Equal distances favor the
/// earlier training row; the prediction is the vote fraction per sense.
class KnnModel final : public Classifier {
public:
  KnnModel(std::vector<std::string> senses, std::vector<BitVector> rows, std::vector<std::uint32_t> labels,
           std::size_t num_features, std::size_t k);

  std::string_view kind() const override { return "knn"; }
  std::size_t num_features() const override { return num_features_; }
  SenseDistribution predict(const BitVector& v) const override;
  void save(std::ostream& out) const override;

  std::size_t k() const { return k_; }

private:
  std::vector<std::string> senses_;
  std::vector<BitVector> rows_;
  std::vector<std::uint32_t> labels_;
  std::size_t num_features_ = 0;
  std::size_t k_ = 1;
};

std::shared_ptr<const KnnModel> train_knn(const TrainingSet& train, std::size_t k = 1);

// --- Most common sense -----------------------------------------------------

/// Training label frequencies. Throws on an empty set.
SenseDistribution majority_baseline(const TrainingSet& train);

class MajorityModel final : public Classifier {
public:
  MajorityModel(SenseDistribution dist, std::size_t num_features) : dist_(std::move(dist)), num_features_(num_features) {}

  std::string_view kind() const override { return "majority"; }
  std::size_t num_features() const override { return num_features_; }
  SenseDistribution predict(const BitVector& v) const override;
  void save(std::ostream& out) const override;

private:
  SenseDistribution dist_;
  std::size_t num_features_ = 0;
};

std::shared_ptr<const MajorityModel> train_majority(const TrainingSet& train);

// --- Serialization ---------------------------------------------------------

/// Reads any model written by Classifier::save, including ensembles.
ClassifierPtr load_classifier(std::istream& in);

}  // namespace wsd
