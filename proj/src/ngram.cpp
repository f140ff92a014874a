#include "wsd/ngram.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>

#include <fmt/format.h>

namespace wsd {

ContingencyTable ContingencyTable::from_margins(std::uint64_t n11, std::uint64_t n1p, std::uint64_t np1,
                                                std::uint64_t npp) {
  if (n11 > n1p || n11 > np1 || n1p + np1 > npp + n11) {
    throw std::invalid_argument(fmt::format("inconsistent margins n11={} n1p={} np1={} npp={}", n11, n1p, np1, npp));
  }
  return {n11, n1p - n11, np1 - n11, npp - n1p - np1 + n11};
}

double g_squared(const ContingencyTable& t) {
  const std::uint64_t npp = t.npp();
  if (npp == 0) throw std::domain_error("g_squared: empty contingency table");
  const std::uint64_t rows[2] = {t.n1p(), t.n2p()};
  const std::uint64_t cols[2] = {t.np1(), t.np2()};
  const std::uint64_t cells[2][2] = {{t.n11, t.n12}, {t.n21, t.n22}};
  double sum = 0.0;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      const std::uint64_t n = cells[i][j];
      if (n == 0) continue;
      // n / m = n * npp / (row * col); equal integer products mean the cell
      // matches its expectation exactly.
      const auto observed = static_cast<unsigned __int128>(n) * npp;
      const auto expected = static_cast<unsigned __int128>(rows[i]) * cols[j];
      if (observed == expected) continue;
      sum += static_cast<double>(n) * std::log(static_cast<double>(observed) / static_cast<double>(expected));
    }
  }
  return sum > 0.0 ? 2.0 * sum : 0.0;
}

std::string_view to_string(FeatureKind k) {
  switch (k) {
    case FeatureKind::unigram: return "unigram";
    case FeatureKind::bigram: return "bigram";
    case FeatureKind::cooccurrence: return "cooccurrence";
    case FeatureKind::gapped_bigram: return "gapped_bigram";
  }
  return "?";
}

std::string_view to_string(Side s) {
  switch (s) {
    case Side::none: return "none";
    case Side::left: return "left";
    case Side::right: return "right";
  }
  return "?";
}

FeatureKind parse_feature_kind(std::string_view s) {
  for (auto k : {FeatureKind::unigram, FeatureKind::bigram, FeatureKind::cooccurrence, FeatureKind::gapped_bigram}) {
    if (to_string(k) == s) return k;
  }
  throw std::invalid_argument("unknown feature kind '" + std::string(s) + "'");
}

bool FeatureSet::add(Feature f, FeatureStats stats) {
  if (!index_.insert(f).second) return false;
  features_.push_back(std::move(f));
  stats_.push_back(stats);
  return true;
}

void FeatureSet::append(const FeatureSet& other) {
  for (std::size_t i = 0; i < other.size(); ++i) add(other.features_[i], other.stats_[i]);
  selection_.insert(selection_.end(), other.selection_.begin(), other.selection_.end());
}

ContingencyTable PairCounts::table(const std::string& a, const std::string& b) const {
  auto get = [](const auto& m, const auto& k) -> std::uint64_t {
    auto it = m.find(k);
    return it == m.end() ? 0 : it->second;
  };
  return ContingencyTable::from_margins(get(pairs, std::pair{a, b}), get(first, a), get(second, b), total);
}

std::uint64_t CooccurrenceCounts::count(const std::string& w, Side side) const {
  auto it = counts.find({w, side});
  return it == counts.end() ? 0 : it->second;
}

ContingencyTable CooccurrenceCounts::table(const std::string& w, Side side) const {
  auto get = [](const auto& m, const std::string& k) -> std::uint64_t {
    auto it = m.find(k);
    return it == m.end() ? 0 : it->second;
  };
  const auto n11 = count(w, side);
  if (side == Side::left) return ContingencyTable::from_margins(n11, get(first, w), target_second, total);
  if (side == Side::right) return ContingencyTable::from_margins(n11, target_first, get(second, w), total);
  throw std::invalid_argument("co-occurrence side must be left or right");
}

UnigramCounts count_unigrams(std::span<const Instance> instances, const StopList& stoplist) {
  UnigramCounts counts;
  for (const auto& inst : instances) {
    for (const auto& tok : inst.tokens) {
      if (!stoplist.contains(tok)) ++counts[tok];
    }
  }
  return counts;
}

PairCounts count_bigrams(std::span<const Instance> instances, const StopList& stoplist, int max_gap) {
  if (max_gap < 0 || max_gap > 2) throw std::invalid_argument("count_bigrams: max_gap must be 0, 1 or 2");
  PairCounts pc;
  pc.max_gap = max_gap;
  std::vector<char> stopped;
  for (const auto& inst : instances) {
    const auto& t = inst.tokens;
    stopped.assign(t.size(), 0);
    for (std::size_t i = 0; i < t.size(); ++i) stopped[i] = stoplist.contains(t[i]);
    for (std::size_t i = 0; i < t.size(); ++i) {
      for (std::size_t j = i + 1; j < t.size() && j <= i + 1 + static_cast<std::size_t>(max_gap); ++j) {
        ++pc.first[t[i]];
        ++pc.second[t[j]];
        ++pc.total;
        if (!(stopped[i] && stopped[j])) ++pc.pairs[{t[i], t[j]}];
      }
    }
  }
  return pc;
}

CooccurrenceCounts extract_cooccurrences(std::span<const Instance> instances) {
  CooccurrenceCounts cc;
  for (const auto& inst : instances) {
    const auto& t = inst.tokens;
    const auto target = inst.target_index;
    for (std::size_t i = 0; i + 1 < t.size(); ++i) {
      ++cc.total;
      if (i == target) {
        ++cc.target_first;
      } else {
        ++cc.first[t[i]];
      }
      if (i + 1 == target) {
        ++cc.target_second;
      } else {
        ++cc.second[t[i + 1]];
      }
    }
    if (target > 0) ++cc.counts[{t[target - 1], Side::left}];
    if (target + 1 < t.size()) ++cc.counts[{t[target + 1], Side::right}];
  }
  return cc;
}

namespace {

struct Candidate {
  Feature feature;
  FeatureStats stats;
};

FeatureSet finish(std::vector<Candidate>& cands) {
  std::sort(cands.begin(), cands.end(), [](const Candidate& a, const Candidate& b) {
    if (a.stats.g2 != b.stats.g2) return a.stats.g2 > b.stats.g2;
    if (a.stats.freq != b.stats.freq) return a.stats.freq > b.stats.freq;
    return a.feature < b.feature;
  });
  FeatureSet fs;
  for (auto& c : cands) fs.add(std::move(c.feature), c.stats);
  return fs;
}

}  // namespace

FeatureSet select_unigrams(const UnigramCounts& counts, std::size_t min_freq) {
  std::vector<Candidate> cands;
  for (const auto& [word, n] : counts) {
    if (n >= min_freq) cands.push_back({Feature::unigram(word), {n, 0.0}});
  }
  auto fs = finish(cands);
  fs.selection().push_back({{FeatureKind::unigram, min_freq, 0.0, 0}, {}});
  return fs;
}

FeatureSet select_pairs(const PairCounts& counts, FeatureKind kind, std::size_t min_freq, double g2_min) {
  if (kind != FeatureKind::bigram && kind != FeatureKind::gapped_bigram) {
    throw std::invalid_argument("select_pairs: kind must be bigram or gapped_bigram");
  }
  if (kind == FeatureKind::bigram && counts.max_gap != 0) {
    throw std::invalid_argument("select_pairs: bigrams need counts with max_gap 0");
  }
  std::vector<Candidate> cands;
  for (const auto& [pair, n] : counts.pairs) {
    if (n < min_freq) continue;
    const double score = g_squared(counts.table(pair.first, pair.second));
    if (score < g2_min) continue;
    Feature f = kind == FeatureKind::bigram ? Feature::bigram(pair.first, pair.second)
                                            : Feature::gapped(pair.first, pair.second, counts.max_gap);
    cands.push_back({std::move(f), {n, score}});
  }
  auto fs = finish(cands);
  fs.selection().push_back({{kind, min_freq, g2_min, counts.max_gap}, {}});
  return fs;
}

FeatureSet select_cooccurrences(const CooccurrenceCounts& counts, std::size_t min_freq, double g2_min,
                                const StopList* exclude) {
  std::vector<Candidate> cands;
  for (const auto& [key, n] : counts.counts) {
    if (n < min_freq) continue;
    if (exclude && exclude->contains(key.first)) continue;
    const double score = g_squared(counts.table(key.first, key.second));
    if (score < g2_min) continue;
    cands.push_back({Feature::cooccurrence(key.first, key.second), {n, score}});
  }
  auto fs = finish(cands);
  fs.selection().push_back({{FeatureKind::cooccurrence, min_freq, g2_min, 0}, {}});
  return fs;
}

FeatureSet select_features(std::span<const Instance> train, const FeatureSpec& spec, const StopList& stoplist,
                           const SelectionOptions& options) {
  if (spec.g2_min < 0.0) throw std::invalid_argument("select_features: g2_min must be >= 0");
  FeatureSet fs;
  switch (spec.kind) {
    case FeatureKind::unigram:
      fs = select_unigrams(count_unigrams(train, stoplist), spec.min_freq);
      break;
    case FeatureKind::bigram:
      fs = select_pairs(count_bigrams(train, stoplist, 0), FeatureKind::bigram, spec.min_freq, spec.g2_min);
      break;
    case FeatureKind::gapped_bigram:
      fs = select_pairs(count_bigrams(train, stoplist, spec.max_gap), FeatureKind::gapped_bigram, spec.min_freq,
                        spec.g2_min);
      break;
    case FeatureKind::cooccurrence:
      fs = select_cooccurrences(extract_cooccurrences(train), spec.min_freq, spec.g2_min,
                                options.stop_cooccurrences ? &stoplist : nullptr);
      break;
  }
  fs.selection().back().spec = spec;
  fs.selection().back().stoplist = stoplist_id(stoplist);
  return fs;
}

void write_feature_set(const FeatureSet& fs, std::ostream& out) {
  out << "# wsd-features 1\n";
  for (const auto& rec : fs.selection()) {
    out << fmt::format("# select\t{}\t{}\t{}\t{}\t{}\n", to_string(rec.spec.kind), rec.spec.min_freq, rec.spec.g2_min,
                       rec.spec.max_gap, rec.stoplist.empty() ? "-" : rec.stoplist);
  }
  for (std::size_t i = 0; i < fs.size(); ++i) {
    const auto& f = fs[i];
    std::string words = f.first;
    if (!f.second.empty()) words += " " + f.second;
    std::string where = f.kind == FeatureKind::cooccurrence ? std::string(to_string(f.side))
                        : f.kind == FeatureKind::unigram     ? std::string("-")
                                                             : std::to_string(f.max_gap);
    out << fmt::format("{}\t{}\t{}\t{}\t{}\n", to_string(f.kind), words, where, fs.stats()[i].freq, fs.stats()[i].g2);
  }
  out << "# end\n";
}

namespace {

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    auto tab = line.find('\t', start);
    out.push_back(line.substr(start, tab == std::string::npos ? std::string::npos : tab - start));
    if (tab == std::string::npos) break;
    start = tab + 1;
  }
  return out;
}

double parse_double(const std::string& s, std::size_t line) {
  try {
    std::size_t used = 0;
    double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ParseError("bad number '" + s + "'", line);
  }
}

std::uint64_t parse_count(const std::string& s, std::size_t line) {
  try {
    std::size_t used = 0;
    auto v = std::stoull(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ParseError("bad count '" + s + "'", line);
  }
}

}  // namespace

FeatureSet read_feature_set(std::istream& in) {
  FeatureSet fs;
  std::string line;
  std::size_t lineno = 0;
  bool header = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    if (line == "# wsd-features 1") {
      header = true;
      continue;
    }
    if (!header) throw ParseError("missing '# wsd-features 1' header", lineno);
    if (line.rfind("# select\t", 0) == 0) {
      auto cols = split_tabs(line.substr(9));
      if (cols.size() != 5) throw ParseError("malformed selection record", lineno);
      SelectionRecord rec;
      rec.spec.kind = parse_feature_kind(cols[0]);
      rec.spec.min_freq = parse_count(cols[1], lineno);
      rec.spec.g2_min = parse_double(cols[2], lineno);
      rec.spec.max_gap = static_cast<int>(parse_count(cols[3], lineno));
      rec.stoplist = cols[4] == "-" ? "" : cols[4];
      fs.selection().push_back(rec);
      continue;
    }
    if (line == "# end") break;
    if (line[0] == '#') continue;
    auto cols = split_tabs(line);
    if (cols.size() != 5) throw ParseError("expected 5 tab-separated columns", lineno);
    Feature f;
    try {
      f.kind = parse_feature_kind(cols[0]);
    } catch (const std::invalid_argument& e) {
      throw ParseError(e.what(), lineno);
    }
    auto space = cols[1].find(' ');
    f.first = cols[1].substr(0, space);
    if (space != std::string::npos) f.second = cols[1].substr(space + 1);
    const bool pair = f.kind == FeatureKind::bigram || f.kind == FeatureKind::gapped_bigram;
    if (f.first.empty() || pair != !f.second.empty()) throw ParseError("wrong number of words", lineno);
    if (f.kind == FeatureKind::cooccurrence) {
      if (cols[2] == "left") {
        f.side = Side::left;
      } else if (cols[2] == "right") {
        f.side = Side::right;
      } else {
        throw ParseError("co-occurrence side must be left or right", lineno);
      }
    } else if (pair) {
      f.max_gap = static_cast<int>(parse_count(cols[2], lineno));
      if (f.max_gap > 2 || (f.kind == FeatureKind::bigram && f.max_gap != 0)) throw ParseError("bad gap", lineno);
    }
    FeatureStats st{parse_count(cols[3], lineno), parse_double(cols[4], lineno)};
    if (!fs.add(std::move(f), st)) throw ParseError("duplicate feature", lineno);
  }
  if (!header) throw ParseError("missing '# wsd-features 1' header", lineno + 1);
  return fs;
}

}  // namespace wsd
