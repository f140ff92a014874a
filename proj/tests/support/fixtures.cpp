#include "support/fixtures.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <fmt/format.h>

namespace wsd::testing {

Instance inst(const std::string& lexelt, const std::string& id, const std::string& sense, std::string_view text) {
  Instance out;
  out.lexelt = lexelt;
  out.id = id;
  if (!sense.empty()) out.gold_senses.push_back(sense);
  std::istringstream ss{std::string(text)};
  bool found = false;
  for (std::string w; ss >> w;) {
    if (w.size() > 2 && w.front() == '[' && w.back() == ']') {
      if (found) throw std::invalid_argument("two targets in fixture text");
      found = true;
      out.target_index = out.tokens.size();
      w = w.substr(1, w.size() - 2);
    }
    out.tokens.push_back(w);
  }
  if (!found) throw std::invalid_argument("fixture text has no [target]");
  return out;
}

const std::vector<std::string>& function_words() {
  static const std::vector<std::string> words = {"the", "of",  "and", "to", "a",  "in", "that", "is", "was", "he",
                                                 "for", "it",  "with", "as", "his", "on", "be",  "at", "by",  "this"};
  return words;
}

namespace {

std::vector<std::string> context(Rng& rng, std::size_t n, std::size_t vocabulary, const char* prefix) {
  std::vector<std::string> out;
  const auto& fw = function_words();
  for (std::size_t i = 0; i < n; ++i) {
    if (rng.below(10) < 4) {
      out.push_back(fw[rng.below(fw.size())]);
    } else {
      out.push_back(fmt::format("{}{}", prefix, rng.below(vocabulary)));
    }
  }
  return out;
}

}  // namespace

LexeltDataset planted_corpus(const PlantedParams& p) {
  Rng rng = Rng::stream(p.seed, 0);
  LexeltDataset ds;
  ds.lexelt = p.lexelt;
  const std::size_t n = p.train + p.test;

  // Independent fair draws: with an exactly balanced pool, shuffled labels
  // would make the training majority the test minority.
  std::vector<std::string> senses(n);
  for (auto& s : senses) s = rng.below(2) ? "money" : "river";

  std::vector<Instance> all;
  for (std::size_t i = 0; i < n; ++i) {
    Instance in;
    in.lexelt = p.lexelt;
    in.id = fmt::format("{}.{:04}", p.lexelt, i);
    in.gold_senses = {senses[i]};
    in.tokens = context(rng, p.context - 1, p.vocabulary, "w");
    in.tokens.push_back(senses[i] == "river" ? "muddy" : "savings");
    in.target_index = in.tokens.size();
    in.tokens.push_back("bank");
    for (auto& w : context(rng, p.context, p.vocabulary, "w")) in.tokens.push_back(std::move(w));
    all.push_back(std::move(in));
  }

  if (p.shuffle_labels) {
    Rng shuffler = Rng::stream(p.seed, 1);
    std::vector<std::string> labels;
    for (const auto& in : all) labels.push_back(in.gold_senses.front());
    shuffler.shuffle(std::span(labels));
    for (std::size_t i = 0; i < n; ++i) all[i].gold_senses = {labels[i]};
  }

  for (std::size_t i = 0; i < n; ++i) (i < p.train ? ds.train : ds.test).push_back(std::move(all[i]));
  return ds;
}

std::vector<LexeltDataset> function_word_corpus(std::size_t lexelts, std::uint64_t seed) {
  std::vector<LexeltDataset> out;
  for (std::size_t l = 0; l < lexelts; ++l) {
    Rng rng = Rng::stream(seed, 100 + l);
    LexeltDataset ds;
    ds.lexelt = fmt::format("filler{}.n", l);
    for (std::size_t i = 0; i < 60; ++i) {
      Instance in;
      in.lexelt = ds.lexelt;
      in.id = fmt::format("{}.{:03}", ds.lexelt, i);
      in.gold_senses = {i % 2 ? "s1" : "s2"};
      in.tokens = context(rng, 10, 5000, "z");
      in.target_index = in.tokens.size();
      in.tokens.push_back(fmt::format("filler{}", l));
      for (auto& w : context(rng, 10, 5000, "z")) in.tokens.push_back(std::move(w));
      ds.train.push_back(std::move(in));
    }
    out.push_back(std::move(ds));
  }
  return out;
}

TrainingSet random_training_set(Rng& rng, std::size_t rows, std::size_t features, std::size_t senses,
                                double density) {
  std::vector<FeatureVector> vs;
  const auto threshold = static_cast<std::uint64_t>(density * 1000.0);
  for (std::size_t r = 0; r < rows; ++r) {
    FeatureVector v{BitVector(features), fmt::format("s{}", rng.below(senses)), fmt::format("r{}", r)};
    for (std::size_t f = 0; f < features; ++f) {
      if (rng.below(1000) < threshold) v.bits.set(f);
    }
    vs.push_back(std::move(v));
  }
  return TrainingSet::from_vectors(vs, features);
}

TempDir::TempDir() {
  auto tmpl = (std::filesystem::temp_directory_path() / "wsd-test-XXXXXX").string();
  if (!mkdtemp(tmpl.data())) throw std::runtime_error("mkdtemp failed");
  path_ = tmpl;
}

TempDir::~TempDir() {
  std::error_code ec;
  std::filesystem::remove_all(path_, ec);
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + p.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text(const std::filesystem::path& p, std::string_view text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
}

std::vector<std::pair<std::string, std::string>> snapshot_tree(const std::filesystem::path& root) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& e : std::filesystem::recursive_directory_iterator(root)) {
    if (e.is_regular_file()) out.emplace_back(std::filesystem::relative(e.path(), root).string(), read_file(e.path()));
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace wsd::testing
