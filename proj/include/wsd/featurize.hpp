#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "wsd/bitvec.hpp"
#include "wsd/corpus.hpp"
#include "wsd/ngram.hpp"

namespace wsd {

/// Binary presence vector over a FeatureSet; bit i is feature i.
struct FeatureVector {
  BitVector bits;
  std::optional<std::string> label;  // set for training instances only
  std::string instance_id;

  bool operator==(const FeatureVector&) const = default;
};

/// Lookup tables for one FeatureSet, reusable across instances.
class Featurizer {
public:
  explicit Featurizer(const FeatureSet& fs);

  std::size_t size() const { return size_; }

  /// Bit i is set iff feature i occurs in the instance: a unigram anywhere,
  /// a (gapped) bigram as an ordered pair within its gap limit, a
  /// co-occurrence immediately on its side of the target.
  BitVector bits(const Instance& inst) const;

  /// Labeled with the first gold sense when `labeled` and one exists.
  FeatureVector operator()(const Instance& inst, bool labeled) const;

private:
  std::size_t size_ = 0;
  std::unordered_map<std::string, std::size_t> unigrams_;
  // Pair lookup per gap limit 0..2.
  std::unordered_map<std::pair<std::string, std::string>, std::vector<std::size_t>, PairHash> pairs_[3];
  int widest_gap_ = -1;
  std::unordered_map<std::pair<std::string, Side>, std::size_t, SidedHash> cooc_;
};

/// Throws std::invalid_argument for an empty feature set.
FeatureVector featurize(const Instance& inst, const FeatureSet& fs);

struct FeaturizedDataset {
  std::vector<FeatureVector> train;
  std::vector<FeatureVector> test;
};

/// Order-preserving; test vectors carry no label.
FeaturizedDataset featurize_dataset(const LexeltDataset& ds, const FeatureSet& fs);

/// ARFF-style dump: one binary attribute per feature, then the sense.
void write_arff(std::ostream& out, const std::string& relation, const FeatureSet& fs,
                std::span<const FeatureVector> vectors, std::span<const std::string> senses);

/// Human-readable feature name, e.g. "bigram:interest_rate" or "cooc:left:fine".
std::string describe(const Feature& f);

}  // namespace wsd
