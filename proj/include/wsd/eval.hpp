#pragma once

// Fine-grained scoring, answer/key files and multi-system agreement.

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "wsd/corpus.hpp"
#include "wsd/systems.hpp"

namespace wsd {

using InstanceKey = std::pair<std::string, std::string>;  // (lexelt, instance id)

class KeySet {
public:
  /// Merges into any senses already recorded. Throws on an empty sense list.
  void add(const std::string& lexelt, const std::string& id, const std::vector<std::string>& senses);
  /// nullptr when the instance has no key.
  const std::set<std::string>* find(const std::string& lexelt, const std::string& id) const;
  std::size_t size() const { return entries_.size(); }
  const std::map<InstanceKey, std::set<std::string>>& entries() const { return entries_; }

private:
  std::map<InstanceKey, std::set<std::string>> entries_;
};

/// Gold senses of every test instance.
KeySet key_from_datasets(std::span<const LexeltDataset> datasets);

/// "lexelt instance_id sense [sense ...]" per line; '#' lines are skipped.
KeySet read_key(std::istream& in);
KeySet read_key_file(const std::filesystem::path& path);
void write_key(const KeySet& key, std::ostream& out);

/// Raised when answered instances have no key entry.
class MissingKeyError : public std::runtime_error {
public:
  explicit MissingKeyError(std::vector<InstanceKey> missing);
  const std::vector<InstanceKey>& missing() const { return missing_; }

private:
  std::vector<InstanceKey> missing_;
};

struct Score {
  std::size_t correct = 0;
  std::size_t total = 0;
  double accuracy() const { return total == 0 ? 0.0 : static_cast<double>(correct) / static_cast<double>(total); }
};

/// Correct iff the predicted sense is one of the key's senses.
Score score(const AnswerSet& answers, const KeySet& key);
Score score(std::span<const AnswerSet> answers, const KeySet& key);

/// One system's predictions across lexelts.
struct SystemAnswers {
  std::string system;
  std::map<InstanceKey, std::string> predictions;
};

/// Throws ValidationError when two sets answer the same instance.
SystemAnswers collect(std::string system, std::span<const AnswerSet> sets);

struct WholePercentShares {
  int all = 0;
  int partial = 0;
  int none = 0;
};

struct AgreementReport {
  std::vector<std::string> systems;
  std::vector<Score> per_system;
  std::vector<std::size_t> by_correct;  // [k] = instances exactly k systems got right
  std::size_t total = 0;

  std::size_t all_correct() const { return by_correct.empty() ? 0 : by_correct.back(); }
  std::size_t none_correct() const { return by_correct.empty() ? 0 : by_correct.front(); }
  std::size_t partial() const { return total - all_correct() - none_correct(); }

  /// Fraction of instances at least one system gets right.
  double optimal_accuracy() const;
  static double share(std::size_t count, std::size_t total);

  /// All and none rounded to whole percent; partial takes the remainder so
  /// the three add up to 100.
  WholePercentShares whole_percent_shares() const;

  /// Report with the given partition counts (index = systems correct).
  static AgreementReport from_counts(std::vector<std::string> systems, std::vector<std::size_t> by_correct);
};

/// Throws std::invalid_argument when the systems answer different instance
/// sets, MissingKeyError for unkeyed instances.
AgreementReport agreement(std::span<const SystemAnswers> systems, const KeySet& key);

void write_agreement_text(const AgreementReport& r, std::ostream& out);
/// Single-line JSON summary.
std::string agreement_json(const AgreementReport& r);

/// Metadata as "# key value" lines, then "lexelt instance_id sense" sorted
/// by instance id. An empty set with no metadata writes nothing.
void write_answers(const AnswerSet& a, std::ostream& out);
void write_answers_file(const AnswerSet& a, const std::filesystem::path& path);

/// Groups lines by lexelt; each prediction gets a point distribution.
/// '#' lines are skipped. Throws ParseError on malformed lines.
std::vector<AnswerSet> read_answers(std::istream& in, const std::string& system = {});
std::vector<AnswerSet> read_answers_file(const std::filesystem::path& path, const std::string& system = {});

/// Every *.ans file below `dir`, in path order. Subdirectories that hold
/// answer files become separate systems named after the subdirectory;
/// files directly in `dir` belong to a system named after `dir`.
std::vector<SystemAnswers> read_answer_tree(const std::filesystem::path& dir);

}  // namespace wsd
