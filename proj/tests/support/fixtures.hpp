#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "wsd/corpus.hpp"
#include "wsd/learners.hpp"
#include "wsd/rng.hpp"

namespace wsd::testing {

/// Space-separated tokens; the target is written in brackets: "a [bank] b".
Instance inst(const std::string& lexelt, const std::string& id, const std::string& sense, std::string_view text);

struct PlantedParams {
  std::size_t train = 500;
  std::size_t test = 200;
  std::size_t context = 12;       // noise tokens on each side of the target
  std::size_t vocabulary = 400;   // noise word types
  std::uint64_t seed = 1;
  bool shuffle_labels = false;    // permute senses over all instances
  std::string lexelt = "bank.n";
};

/// Two senses drawn independently with equal probability. Sense "river" always has "muddy" immediately left
/// of the target and sense "money" always has "savings" there; the rest of
/// each context is noise words and function words.
LexeltDataset planted_corpus(const PlantedParams& p);

/// Lexelts of similar size whose text is mostly function words; a
/// stop-list induced from them holds those words.
std::vector<LexeltDataset> function_word_corpus(std::size_t lexelts, std::uint64_t seed);

const std::vector<std::string>& function_words();

/// Random labeled rows over `senses` classes.
TrainingSet random_training_set(Rng& rng, std::size_t rows, std::size_t features, std::size_t senses,
                                double density = 0.3);

class TempDir {
public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }

private:
  std::filesystem::path path_;
};

std::string read_file(const std::filesystem::path& p);
void write_text(const std::filesystem::path& p, std::string_view text);

/// Every regular file below `root` by relative path, with its bytes.
std::vector<std::pair<std::string, std::string>> snapshot_tree(const std::filesystem::path& root);

}  // namespace wsd::testing
