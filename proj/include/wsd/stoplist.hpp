#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "wsd/corpus.hpp"

namespace wsd {

struct StopListProvenance {
  std::vector<std::string> sampled_lexelts;
  std::uint64_t seed = 0;
  std::size_t sample_size = 0;
  std::size_t min_count = 0;
  bool induced = false;  // false when loaded from a file
};

struct StopList {
  std::set<std::string, std::less<>> words;
  StopListProvenance provenance;

  bool contains(std::string_view word) const { return words.find(word) != words.end(); }
};

struct StopListParams {
  std::size_t sample_size = 5;
  std::size_t min_count = 10;
  double size_tolerance = 0.25;  // eligible: training tokens within ±25% of the median
};

/// Induces a stop-list: every token occurring at least min_count times in
/// aggregate over the training splits of sample_size randomly chosen
/// lexelts of comparable size. Throws when every training split is empty.
StopList build_stoplist(std::span<const LexeltDataset> datasets, std::uint64_t seed,
                        const StopListParams& params = {});

/// Case-folds `word` before the lookup.
bool is_stopped(std::string_view word, const StopList& list);

/// Stable identifier of a list's contents ("sl-" + 16 hex digits, or
/// "none" for an empty list).
std::string stoplist_id(const StopList& list);

/// One word per line, UTF-8, sorted. The reader skips lines starting with '#'.
void write_stoplist(const StopList& list, std::ostream& out);
StopList read_stoplist(std::istream& in);
StopList read_stoplist(const std::filesystem::path& path);

}  // namespace wsd
