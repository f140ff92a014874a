#pragma once

// The eight system configurations per language and the driver that trains
// one of them on a lexelt and tags its test instances.

#include <cstdint>
#include <iosfwd>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "wsd/corpus.hpp"
#include "wsd/ensemble.hpp"
#include "wsd/featurize.hpp"
#include "wsd/learners.hpp"
#include "wsd/ngram.hpp"
#include "wsd/stoplist.hpp"

namespace wsd {

enum class Language { en, es };
std::string_view to_string(Language l);
Language parse_language(std::string_view s);

enum class LearnerKind { naive_bayes, decision_tree, bagged_tree, decision_stump, nearest_neighbor };
std::string_view to_string(LearnerKind k);

enum class Combine { none, weighted, majority };
std::string_view to_string(Combine c);

/// One feature set (the union of its specs) and the learners trained on
/// it. Several learners on one set are combined by weighted vote.
struct ComponentSpec {
  std::vector<FeatureSpec> features;
  std::vector<LearnerKind> learners;

  bool operator==(const ComponentSpec&) const = default;
};

struct SystemConfig {
  std::string name;
  Language language = Language::en;
  std::vector<ComponentSpec> components;
  Combine combine = Combine::none;
  std::vector<SystemConfig> members;  // kitchen-sink systems: full member configs

  std::size_t replicates = 10;
  TreeConfig tree;
  std::size_t knn_k = 1;
  SelectionOptions selection;

  bool operator==(const SystemConfig&) const = default;
};

/// Canonical names for a language, in registry order.
std::vector<std::string> system_names(Language language);

/// Accepts either name of an English/Spanish pair (case-insensitive) and
/// returns the configuration for `language`, named by that language's
/// member of the pair. Throws std::invalid_argument for unknown names.
SystemConfig build_system(std::string_view name, Language language);

/// Overrides one parameter, e.g. "bigram.g2_min" = "5", "tree.min_leaf",
/// "bagging.replicates", "knn.k", "cooccurrence.stoplist".
/// Throws std::invalid_argument for unknown keys or bad values.
void apply_override(SystemConfig& cfg, std::string_view key, std::string_view value);

/// Canonical text rendering; equal configs render identically.
std::string describe(const SystemConfig& cfg);
std::string config_digest(const SystemConfig& cfg);

struct Answer {
  std::string sense;
  SenseDistribution distribution;

  bool operator==(const Answer&) const = default;
};

struct AnswerSet {
  std::string lexelt;
  std::string system;
  std::map<std::string, Answer> entries;  // by instance id
  std::map<std::string, std::string> metadata;

  bool operator==(const AnswerSet&) const = default;
};

struct TrainedComponent {
  FeatureSet features;
  ClassifierPtr model;
  bool fallback = false;  // no feature survived selection; predicts the prior
  std::shared_ptr<const Featurizer> featurizer;  // null for a fallback
};

struct TrainedSystem {
  std::string name;
  std::string lexelt;
  std::string config_digest;
  std::uint64_t seed = 0;
  Combine combine = Combine::none;
  std::vector<TrainedComponent> components;
  std::vector<TrainedSystem> members;

  Vote decide(const Instance& inst) const;
  std::vector<std::string> fallbacks() const;  // "<system>/<component>" labels
};

/// Selects features from `train` only and fits every component. Throws on
/// an empty training split.
TrainedSystem train_system(const SystemConfig& cfg, std::string_view lexelt, std::span<const Instance> train,
                           const StopList& stoplist, std::uint64_t seed);

AnswerSet apply_system(const TrainedSystem& sys, std::span<const Instance> test);

AnswerSet run_system(const SystemConfig& cfg, const LexeltDataset& ds, const StopList& stoplist, std::uint64_t seed);

void save_system(const TrainedSystem& sys, std::ostream& out);
TrainedSystem load_system(std::istream& in);

}  // namespace wsd
