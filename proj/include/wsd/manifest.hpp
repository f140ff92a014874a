#pragma once

// Declarative experiment description for `wsd run`.
//
// {
//   "language": "en",
//   "systems": ["duluth1", "duluthB"],          // default: all eight
//   "data": ["train_and_test.jsonl",             // canonical files, or
//            {"train": "a.train.xml", "test": "a.test.xml"}],
//   "key": "a.key",                              // default: gold senses of the test split
//   "seed": 42,
//   "stoplist": "induce" | "none" | "path/to/list.txt",
//   "stoplist_corpus": ["function_words.jsonl"], // induction source; default: data
//   "overrides": {"bigram.g2_min": 5},
//   "output": "out",
//   "jobs": 1
// }
//
// Relative paths resolve against the manifest's directory.

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "wsd/corpus.hpp"
#include "wsd/stoplist.hpp"
#include "wsd/systems.hpp"

namespace wsd {

struct DataSource {
  std::filesystem::path canonical;  // set for canonical files
  std::filesystem::path train_xml;  // set for markup pairs
  std::filesystem::path test_xml;
};

struct ExperimentManifest {
  std::filesystem::path base_dir;
  Language language = Language::en;
  std::vector<std::string> systems;
  std::vector<DataSource> data;
  std::filesystem::path key;
  std::uint64_t seed = 42;
  std::string stoplist = "induce";  // "induce", "none" or a path
  std::vector<std::filesystem::path> stoplist_corpus;
  std::vector<std::pair<std::string, std::string>> overrides;  // applied in order
  std::filesystem::path output;
  std::size_t jobs = 1;
};

/// Throws std::invalid_argument on unknown keys or ill-typed values.
ExperimentManifest parse_manifest(const std::string& json_text, const std::filesystem::path& base_dir);
ExperimentManifest load_manifest(const std::filesystem::path& path);

std::filesystem::path resolve(const ExperimentManifest& m, const std::filesystem::path& p);

/// Lowercase hex SHA-256.
std::string sha256_hex(std::string_view data);
std::string sha256_file(const std::filesystem::path& path);

/// Digest over every setting that affects outputs, plus the contents of
/// each input file. Output directory and job count are excluded.
std::string manifest_digest(const ExperimentManifest& m);

/// Datasets from every data source, merged by lexelt in order of first
/// appearance.
std::vector<LexeltDataset> load_data(const ExperimentManifest& m, std::span<const DataSource> sources);

}  // namespace wsd
