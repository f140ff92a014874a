#include "wsd/featurize.hpp"

#include <algorithm>
#include <ostream>
#include <stdexcept>

namespace wsd {

Featurizer::Featurizer(const FeatureSet& fs) : size_(fs.size()) {
  for (std::size_t i = 0; i < fs.size(); ++i) {
    const auto& f = fs[i];
    switch (f.kind) {
      case FeatureKind::unigram:
        unigrams_.emplace(f.first, i);
        break;
      case FeatureKind::bigram:
      case FeatureKind::gapped_bigram: {
        const int gap = f.kind == FeatureKind::bigram ? 0 : f.max_gap;
        if (gap < 0 || gap > 2) throw std::invalid_argument("feature gap must be 0..2");
        pairs_[gap][{f.first, f.second}].push_back(i);
        widest_gap_ = std::max(widest_gap_, gap);
        break;
      }
      case FeatureKind::cooccurrence:
        cooc_.emplace(std::pair{f.first, f.side}, i);
        break;
    }
  }
}

BitVector Featurizer::bits(const Instance& inst) const {
  BitVector v(size_);
  const auto& t = inst.tokens;
  if (!unigrams_.empty()) {
    for (const auto& tok : t) {
      if (auto it = unigrams_.find(tok); it != unigrams_.end()) v.set(it->second);
    }
  }
  if (widest_gap_ >= 0) {
    std::pair<std::string, std::string> key;
    for (std::size_t i = 0; i < t.size(); ++i) {
      for (int gap = 0; gap <= widest_gap_; ++gap) {
        const std::size_t j = i + 1 + static_cast<std::size_t>(gap);
        if (j >= t.size()) break;
        key.first = t[i];
        key.second = t[j];
        // A window with `gap` intervening tokens matches every feature whose
        // limit is at least `gap`.
        for (int limit = gap; limit <= 2; ++limit) {
          if (auto it = pairs_[limit].find(key); it != pairs_[limit].end()) {
            for (auto idx : it->second) v.set(idx);
          }
        }
      }
    }
  }
  if (!cooc_.empty()) {
    const auto target = inst.target_index;
    if (target > 0 && target - 1 < t.size()) {
      if (auto it = cooc_.find({t[target - 1], Side::left}); it != cooc_.end()) v.set(it->second);
    }
    if (target + 1 < t.size()) {
      if (auto it = cooc_.find({t[target + 1], Side::right}); it != cooc_.end()) v.set(it->second);
    }
  }
  return v;
}

FeatureVector Featurizer::operator()(const Instance& inst, bool labeled) const {
  FeatureVector fv{bits(inst), std::nullopt, inst.id};
  if (labeled && !inst.gold_senses.empty()) fv.label = inst.gold_senses.front();
  return fv;
}

FeatureVector featurize(const Instance& inst, const FeatureSet& fs) {
  if (fs.empty()) throw std::invalid_argument("featurize: empty feature set");
  return Featurizer(fs)(inst, true);
}

FeaturizedDataset featurize_dataset(const LexeltDataset& ds, const FeatureSet& fs) {
  Featurizer fz(fs);
  FeaturizedDataset out;
  out.train.reserve(ds.train.size());
  out.test.reserve(ds.test.size());
  for (const auto& inst : ds.train) out.train.push_back(fz(inst, true));
  for (const auto& inst : ds.test) out.test.push_back(fz(inst, false));
  return out;
}

std::string describe(const Feature& f) {
  switch (f.kind) {
    case FeatureKind::unigram:
      return "unigram:" + f.first;
    case FeatureKind::bigram:
      return "bigram:" + f.first + "_" + f.second;
    case FeatureKind::gapped_bigram:
      return "gapped" + std::to_string(f.max_gap) + ":" + f.first + "_" + f.second;
    case FeatureKind::cooccurrence:
      return std::string("cooc:") + std::string(to_string(f.side)) + ":" + f.first;
  }
  return "?";
}

namespace {

std::string arff_quote(const std::string& s) {
  std::string out = "'";
  for (char c : s) {
    if (c == '\'' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  return out + "'";
}

}  // namespace

void write_arff(std::ostream& out, const std::string& relation, const FeatureSet& fs,
                std::span<const FeatureVector> vectors, std::span<const std::string> senses) {
  out << "@relation " << arff_quote(relation) << "\n\n";
  for (std::size_t i = 0; i < fs.size(); ++i) out << "@attribute " << arff_quote(describe(fs[i])) << " {0,1}\n";
  out << "@attribute sense {";
  for (std::size_t i = 0; i < senses.size(); ++i) out << (i ? "," : "") << arff_quote(senses[i]);
  out << "}\n\n@data\n";
  for (const auto& v : vectors) {
    for (std::size_t i = 0; i < v.bits.size(); ++i) out << (v.bits.test(i) ? "1," : "0,");
    out << (v.label ? arff_quote(*v.label) : std::string("?")) << '\n';
  }
}

}  // namespace wsd
