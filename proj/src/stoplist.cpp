#include "wsd/stoplist.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <numeric>
#include <stdexcept>
#include <unordered_map>

#include "hash.hpp"
#include "wsd/rng.hpp"

namespace wsd {

namespace {

std::size_t training_tokens(const LexeltDataset& ds) {
  std::size_t n = 0;
  for (const auto& inst : ds.train) n += inst.tokens.size();
  return n;
}

double median(std::vector<std::size_t> v) {
  std::sort(v.begin(), v.end());
  auto n = v.size();
  return n % 2 ? static_cast<double>(v[n / 2]) : (static_cast<double>(v[n / 2 - 1]) + static_cast<double>(v[n / 2])) / 2.0;
}

}  // namespace

StopList build_stoplist(std::span<const LexeltDataset> datasets, std::uint64_t seed, const StopListParams& params) {
  std::vector<std::size_t> candidates;
  std::vector<std::size_t> sizes;
  for (std::size_t i = 0; i < datasets.size(); ++i) {
    if (!datasets[i].train.empty()) {
      candidates.push_back(i);
      sizes.push_back(training_tokens(datasets[i]));
    }
  }
  if (candidates.empty()) throw std::invalid_argument("build_stoplist: every training split is empty");

  const double mid = median(sizes);
  std::vector<std::size_t> eligible;
  for (std::size_t k = 0; k < candidates.size(); ++k) {
    auto size = static_cast<double>(sizes[k]);
    if (size >= mid * (1.0 - params.size_tolerance) && size <= mid * (1.0 + params.size_tolerance)) {
      eligible.push_back(candidates[k]);
    }
  }

  // Partial Fisher-Yates over the eligible set; eligible is in input order,
  // so the draw depends only on the seed and the dataset sequence.
  Rng rng(splitmix64(seed));
  const std::size_t take = std::min(params.sample_size, eligible.size());
  for (std::size_t i = 0; i < take; ++i) {
    auto j = i + static_cast<std::size_t>(rng.below(eligible.size() - i));
    std::swap(eligible[i], eligible[j]);
  }
  eligible.resize(take);

  std::unordered_map<std::string, std::size_t> counts;
  StopList list;
  for (auto idx : eligible) {
    list.provenance.sampled_lexelts.push_back(datasets[idx].lexelt);
    for (const auto& inst : datasets[idx].train) {
      for (const auto& tok : inst.tokens) ++counts[tok];
    }
  }
  for (const auto& [word, n] : counts) {
    if (n >= params.min_count) list.words.insert(word);
  }
  list.provenance.seed = seed;
  list.provenance.sample_size = params.sample_size;
  list.provenance.min_count = params.min_count;
  list.provenance.induced = true;
  return list;
}

bool is_stopped(std::string_view word, const StopList& list) {
  if (list.words.empty()) return false;
  return list.contains(fold_case(word));
}

std::string stoplist_id(const StopList& list) {
  if (list.words.empty()) return "none";
  // Hash of the sorted, newline-terminated words.
  std::uint64_t h = fnv1a64("");
  for (const auto& w : list.words) h = fnv1a64("\n", fnv1a64(w, h));
  return "sl-" + hex64(h);
}

void write_stoplist(const StopList& list, std::ostream& out) {
  for (const auto& w : list.words) out << w << '\n';
}

StopList read_stoplist(std::istream& in) {
  StopList list;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto b = line.find_first_not_of(" \t");
    if (b == std::string::npos || line[b] == '#') continue;
    auto e = line.find_last_not_of(" \t");
    list.words.insert(fold_case(line.substr(b, e - b + 1)));
  }
  return list;
}

StopList read_stoplist(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return read_stoplist(in);
}

}  // namespace wsd
