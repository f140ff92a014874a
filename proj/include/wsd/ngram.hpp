#pragma once

// Unigram, bigram, gapped-bigram and target co-occurrence counting, the G²
// log-likelihood ratio, and threshold-based feature selection.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "wsd/corpus.hpp"
#include "wsd/stoplist.hpp"

namespace wsd {

/// Observed counts for a word pair. n11 is the pair itself, n12 the first
/// word with something else, n21 something else with the second word.
struct ContingencyTable {
  std::uint64_t n11 = 0, n12 = 0, n21 = 0, n22 = 0;

  std::uint64_t n1p() const { return n11 + n12; }
  std::uint64_t np1() const { return n11 + n21; }
  std::uint64_t n2p() const { return n21 + n22; }
  std::uint64_t np2() const { return n12 + n22; }
  std::uint64_t npp() const { return n11 + n12 + n21 + n22; }

  /// Builds the table from the pair count and its margins. Throws when the
  /// margins are inconsistent.
  static ContingencyTable from_margins(std::uint64_t n11, std::uint64_t n1p, std::uint64_t np1, std::uint64_t npp);

  bool operator==(const ContingencyTable&) const = default;
};

/// G² = 2 Σ n_ij ln(n_ij / m_ij), with m_ij the expected count under
/// independence and 0·ln 0 = 0. Throws std::domain_error on an empty table.
double g_squared(const ContingencyTable& t);

/// Critical values of the chi-squared distribution with one degree of
/// freedom, as used for the feature thresholds.
namespace g2 {
inline constexpr double p10 = 2.706;
inline constexpr double p01 = 6.635;
inline constexpr double p001 = 10.827;
}  // namespace g2

enum class FeatureKind { unigram, bigram, cooccurrence, gapped_bigram };
enum class Side { none, left, right };

std::string_view to_string(FeatureKind k);
std::string_view to_string(Side s);
FeatureKind parse_feature_kind(std::string_view s);

/// A lexical feature. Unigrams use `first` only. Bigrams and gapped bigrams
/// are the ordered pair (first, second) with up to max_gap intervening
/// tokens. A co-occurrence is `first` seen immediately on `side` of the
/// target word; the target itself is implicit since its surface form varies
/// between instances.
struct Feature {
  FeatureKind kind = FeatureKind::unigram;
  std::string first;
  std::string second;
  Side side = Side::none;
  int max_gap = 0;

  static Feature unigram(std::string w) { return {FeatureKind::unigram, std::move(w), {}, Side::none, 0}; }
  static Feature bigram(std::string a, std::string b) {
    return {FeatureKind::bigram, std::move(a), std::move(b), Side::none, 0};
  }
  static Feature gapped(std::string a, std::string b, int max_gap) {
    return {FeatureKind::gapped_bigram, std::move(a), std::move(b), Side::none, max_gap};
  }
  static Feature cooccurrence(std::string w, Side side) {
    return {FeatureKind::cooccurrence, std::move(w), {}, side, 0};
  }

  auto operator<=>(const Feature&) const = default;
  bool operator==(const Feature&) const = default;
};

/// Rule used to select one group of features.
struct FeatureSpec {
  FeatureKind kind = FeatureKind::unigram;
  std::size_t min_freq = 1;
  double g2_min = 0.0;  // ignored for unigrams
  int max_gap = 0;      // gapped bigrams only, 0..2

  bool operator==(const FeatureSpec&) const = default;
};

struct SelectionRecord {
  FeatureSpec spec;
  std::string stoplist;  // stoplist_id()
  bool operator==(const SelectionRecord&) const = default;
};

struct FeatureStats {
  std::uint64_t freq = 0;
  double g2 = 0.0;  // 0 for unigrams
  bool operator==(const FeatureStats&) const = default;
};

/// Ordered, duplicate-free features; position i is bit i of every vector
/// built from the set.
class FeatureSet {
public:
  FeatureSet() = default;

  /// Appends unless already present; returns false for a duplicate.
  bool add(Feature f, FeatureStats stats = {});
  void append(const FeatureSet& other);

  std::size_t size() const { return features_.size(); }
  bool empty() const { return features_.empty(); }
  const Feature& operator[](std::size_t i) const { return features_[i]; }
  std::span<const Feature> features() const { return features_; }
  std::span<const FeatureStats> stats() const { return stats_; }
  std::vector<SelectionRecord>& selection() { return selection_; }
  const std::vector<SelectionRecord>& selection() const { return selection_; }

  bool operator==(const FeatureSet&) const = default;

private:
  std::vector<Feature> features_;
  std::vector<FeatureStats> stats_;
  std::vector<SelectionRecord> selection_;
  std::set<Feature> index_;
};

struct PairHash {
  std::size_t operator()(const std::pair<std::string, std::string>& p) const noexcept {
    auto h = std::hash<std::string>{}(p.first);
    return h ^ (std::hash<std::string>{}(p.second) + 0x9E3779B97F4A7C15ULL + (h << 6) + (h >> 2));
  }
};

struct SidedHash {
  std::size_t operator()(const std::pair<std::string, Side>& p) const noexcept {
    return std::hash<std::string>{}(p.first) * 3 + static_cast<std::size_t>(p.second);
  }
};

using UnigramCounts = std::unordered_map<std::string, std::uint64_t>;

/// Ordered pair counts over every window with at most max_gap intervening
/// tokens, plus the margins needed for contingency tables.
struct PairCounts {
  int max_gap = 0;
  std::unordered_map<std::pair<std::string, std::string>, std::uint64_t, PairHash> pairs;
  std::unordered_map<std::string, std::uint64_t> first;   // windows with the word first
  std::unordered_map<std::string, std::uint64_t> second;  // windows with the word second
  std::uint64_t total = 0;                                // all windows

  ContingencyTable table(const std::string& a, const std::string& b) const;
};

/// Words adjacent to the target. Margins come from the adjacent-window
/// counts with the target position treated as its own symbol.
struct CooccurrenceCounts {
  std::unordered_map<std::pair<std::string, Side>, std::uint64_t, SidedHash> counts;
  std::unordered_map<std::string, std::uint64_t> first;   // non-target word first in a window
  std::unordered_map<std::string, std::uint64_t> second;  // non-target word second in a window
  std::uint64_t target_first = 0;
  std::uint64_t target_second = 0;
  std::uint64_t total = 0;

  std::uint64_t count(const std::string& w, Side side) const;
  ContingencyTable table(const std::string& w, Side side) const;
};

/// Every non-stopped token occurrence.
UnigramCounts count_unigrams(std::span<const Instance> instances, const StopList& stoplist);

/// Pairs are dropped only when both words are stopped; margins and the
/// window total include every window. Windows never cross instances.
PairCounts count_bigrams(std::span<const Instance> instances, const StopList& stoplist, int max_gap);

CooccurrenceCounts extract_cooccurrences(std::span<const Instance> instances);

// Selection. Features pass when freq >= min_freq and, except for unigrams,
// G² >= g2_min. Order: G² descending, frequency descending, then feature
// order.
FeatureSet select_unigrams(const UnigramCounts& counts, std::size_t min_freq);
FeatureSet select_pairs(const PairCounts& counts, FeatureKind kind, std::size_t min_freq, double g2_min);
FeatureSet select_cooccurrences(const CooccurrenceCounts& counts, std::size_t min_freq, double g2_min,
                                const StopList* exclude = nullptr);

struct SelectionOptions {
  bool stop_cooccurrences = false;  // drop co-occurrences whose word is stopped

  bool operator==(const SelectionOptions&) const = default;
};

/// Counts and selects in one step from training instances.
FeatureSet select_features(std::span<const Instance> train, const FeatureSpec& spec, const StopList& stoplist,
                           const SelectionOptions& options = {});

/// "kind<TAB>words<TAB>side/gap<TAB>freq<TAB>g2" per feature, preceded by
/// '#' header lines carrying the selection records and closed by "# end".
/// Pair words are separated by a single space.
void write_feature_set(const FeatureSet& fs, std::ostream& out);
FeatureSet read_feature_set(std::istream& in);

}  // namespace wsd
