#pragma once

// Sense-tagged lexical-sample data: tokenization, the canonical JSON Lines
// format, and the lexical-sample XML adapter.

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace wsd {

/// A normalized surface form. Never empty, never contains whitespace.
using Token = std::string;

class ParseError : public std::runtime_error {
public:
  ParseError(const std::string& what, std::size_t line)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

private:
  std::size_t line_;
};

class ValidationError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

enum class Split { train, test };

std::string_view to_string(Split s);

/// One sense-tagged occurrence of a target word.
struct Instance {
  std::string lexelt;
  std::string id;
  std::vector<std::string> gold_senses;  // empty for unlabeled test data
  std::vector<Token> tokens;
  std::size_t target_index = 0;

  bool operator==(const Instance&) const = default;
};

struct LexeltDataset {
  std::string lexelt;
  std::vector<Instance> train;
  std::vector<Instance> test;

  bool operator==(const LexeltDataset&) const = default;
};

struct TokenizerConfig {
  std::string language = "en";
  bool lowercase = true;
  bool strip_punctuation = true;
  bool keep_numbers = true;
};

/// Whitespace split, then optional case folding, punctuation trimming and
/// number removal. The same rules serve every language.
std::vector<Token> tokenize(std::string_view text, const TokenizerConfig& config = {});

/// Lowercases ASCII and the common Latin, Greek and Cyrillic ranges of a
/// UTF-8 string. Invalid sequences pass through unchanged.
std::string fold_case(std::string_view text);

/// Checks the Instance and LexeltDataset invariants; throws ValidationError.
void validate(const LexeltDataset& ds);

// Canonical format: one JSON object per line with the keys lexelt, id,
// split, senses, tokens, target_index (in that order).

/// Reads every record of a canonical stream, grouped by lexelt in order of
/// first appearance. Record order within each split is preserved.
std::vector<LexeltDataset> read_canonical_all(std::istream& in);
std::vector<LexeltDataset> read_canonical_all(const std::filesystem::path& path);

/// Reads a canonical file holding at most one lexelt. An empty file yields
/// an empty dataset.
LexeltDataset read_canonical(const std::filesystem::path& path);
LexeltDataset read_canonical(std::istream& in);

/// Writes train records first, then test records.
void write_canonical(const LexeltDataset& ds, std::ostream& out);
void write_canonical(const LexeltDataset& ds, const std::filesystem::path& path);

struct XmlReadResult {
  std::vector<LexeltDataset> lexelts;
  std::size_t skipped = 0;  // instances dropped for a missing or empty head
};

/// Parses a lexical-sample markup document (corpus/lexelt/instance/answer/
/// context/head elements). Instances land in the given split. Malformed
/// markup throws ParseError.
XmlReadResult read_senseval_xml(std::string_view document, const TokenizerConfig& config,
                                Split split = Split::train);
XmlReadResult read_senseval_xml_file(const std::filesystem::path& path, const TokenizerConfig& config,
                                Split split = Split::train);

}  // namespace wsd
