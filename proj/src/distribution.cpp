#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "wsd/learners.hpp"

namespace wsd {

SenseDistribution::SenseDistribution(std::map<std::string, double> scores) {
  for (auto& [sense, score] : scores) add(sense, score);
}

void SenseDistribution::add(const std::string& sense, double score) {
  if (!(score >= 0.0) || !std::isfinite(score)) {
    throw std::invalid_argument("sense score must be finite and non-negative");
  }
  scores_[sense] += score;
}

double SenseDistribution::score(const std::string& sense) const {
  auto it = scores_.find(sense);
  return it == scores_.end() ? 0.0 : it->second;
}

double SenseDistribution::total() const {
  double t = 0.0;
  for (const auto& [_, s] : scores_) t += s;
  return t;
}

SenseDistribution SenseDistribution::normalized() const {
  SenseDistribution out;
  const double t = total();
  for (const auto& [sense, s] : scores_) {
    out.scores_[sense] = t > 0.0 ? s / t : 1.0 / static_cast<double>(scores_.size());
  }
  return out;
}

const std::string& SenseDistribution::argmax() const {
  if (scores_.empty()) throw std::logic_error("argmax of an empty distribution");
  auto best = scores_.begin();
  for (auto it = std::next(best); it != scores_.end(); ++it) {
    if (it->second > best->second) best = it;
  }
  return best->first;
}

std::vector<std::size_t> TrainingSet::class_counts() const {
  std::vector<std::size_t> counts(senses.size(), 0);
  for (auto l : labels) ++counts[l];
  return counts;
}

TrainingSet TrainingSet::from_vectors(std::span<const FeatureVector> vectors, std::size_t num_features) {
  std::set<std::string> inventory;
  for (const auto& v : vectors) {
    if (!v.label) throw std::invalid_argument("training vector " + v.instance_id + " has no label");
    if (v.bits.size() != num_features) {
      throw std::invalid_argument("training vector " + v.instance_id + " has " + std::to_string(v.bits.size()) +
                                  " bits, expected " + std::to_string(num_features));
    }
    inventory.insert(*v.label);
  }
  TrainingSet ts;
  ts.num_features = num_features;
  ts.senses.assign(inventory.begin(), inventory.end());
  ts.rows.reserve(vectors.size());
  ts.labels.reserve(vectors.size());
  for (const auto& v : vectors) {
    ts.rows.push_back(v.bits);
    auto it = std::lower_bound(ts.senses.begin(), ts.senses.end(), *v.label);
    ts.labels.push_back(static_cast<std::uint32_t>(it - ts.senses.begin()));
  }
  return ts;
}

TrainingSet TrainingSet::subset(std::span<const std::size_t> indices) const {
  TrainingSet ts;
  ts.num_features = num_features;
  ts.senses = senses;
  ts.rows.reserve(indices.size());
  ts.labels.reserve(indices.size());
  for (auto i : indices) {
    ts.rows.push_back(rows.at(i));
    ts.labels.push_back(labels.at(i));
  }
  return ts;
}

void Classifier::check_length(const BitVector& v) const {
  if (v.size() != num_features()) {
    throw std::invalid_argument(std::string(kind()) + ": vector has " + std::to_string(v.size()) +
                                " bits, model expects " + std::to_string(num_features()));
  }
}

SenseDistribution majority_baseline(const TrainingSet& train) {
  if (train.empty()) throw std::invalid_argument("majority_baseline: empty training set");
  auto counts = train.class_counts();
  SenseDistribution d;
  for (std::size_t s = 0; s < counts.size(); ++s) {
    d.add(train.senses[s], static_cast<double>(counts[s]) / static_cast<double>(train.size()));
  }
  return d;
}

SenseDistribution MajorityModel::predict(const BitVector& v) const {
  check_length(v);
  return dist_;
}

std::shared_ptr<const MajorityModel> train_majority(const TrainingSet& train) {
  return std::make_shared<MajorityModel>(majority_baseline(train), train.num_features);
}

}  // namespace wsd
