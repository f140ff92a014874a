#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

#include "wsd/kernels.hpp"
#include "wsd/learners.hpp"

namespace wsd {

NaiveBayesModel::NaiveBayesModel(std::vector<std::string> senses, std::vector<std::uint64_t> class_counts,
                                 std::vector<std::vector<std::uint64_t>> feature_counts, std::size_t num_features)
    : senses_(std::move(senses)),
      class_counts_(std::move(class_counts)),
      feature_counts_(std::move(feature_counts)),
      num_features_(num_features) {
  if (senses_.empty()) throw std::invalid_argument("NaiveBayesModel: no senses");
  if (class_counts_.size() != senses_.size() || feature_counts_.size() != senses_.size()) {
    throw std::invalid_argument("NaiveBayesModel: count tables do not match the sense inventory");
  }
  for (std::size_t s = 0; s < senses_.size(); ++s) {
    total_ += class_counts_[s];
    if (feature_counts_[s].size() != num_features_) throw std::invalid_argument("NaiveBayesModel: feature count width");
    for (auto c : feature_counts_[s]) {
      if (c > class_counts_[s]) throw std::invalid_argument("NaiveBayesModel: feature count exceeds class count");
    }
  }
  base_.resize(senses_.size());
  delta_.assign(senses_.size(), std::vector<double>(num_features_));
  for (std::size_t s = 0; s < senses_.size(); ++s) {
    double base = std::log(prior(s));
    for (std::size_t f = 0; f < num_features_; ++f) {
      const double p1 = p_one(f, s);
      const double log0 = std::log1p(-p1);
      base += log0;
      delta_[s][f] = std::log(p1) - log0;
    }
    base_[s] = base;
  }
}

double NaiveBayesModel::prior(std::size_t sense) const {
  return static_cast<double>(class_counts_.at(sense) + 1) / static_cast<double>(total_ + senses_.size());
}

double NaiveBayesModel::p_one(std::size_t feature, std::size_t sense) const {
  return static_cast<double>(feature_counts_.at(sense).at(feature) + 1) /
         static_cast<double>(class_counts_[sense] + 2);
}

std::vector<double> NaiveBayesModel::log_scores(const BitVector& v) const {
  check_length(v);
  std::vector<double> out(senses_.size());
  for (std::size_t s = 0; s < senses_.size(); ++s) out[s] = base_[s] + simd::masked_sum(v.words(), delta_[s]);
  return out;
}

SenseDistribution NaiveBayesModel::predict(const BitVector& v) const {
  const auto logs = log_scores(v);
  const double top = *std::max_element(logs.begin(), logs.end());
  double sum = 0.0;
  std::vector<double> p(logs.size());
  for (std::size_t s = 0; s < logs.size(); ++s) sum += (p[s] = std::exp(logs[s] - top));
  SenseDistribution d;
  for (std::size_t s = 0; s < logs.size(); ++s) d.add(senses_[s], p[s] / sum);
  return d;
}

std::shared_ptr<const NaiveBayesModel> train_naive_bayes(const TrainingSet& train) {
  if (train.empty()) throw std::invalid_argument("train_naive_bayes: empty training set");
  const std::size_t S = train.senses.size();
  std::vector<std::uint64_t> class_counts(S, 0);
  std::vector<std::vector<std::uint64_t>> feature_counts(S, std::vector<std::uint64_t>(train.num_features, 0));
  for (std::size_t r = 0; r < train.size(); ++r) {
    const auto s = train.labels[r];
    ++class_counts[s];
    auto& fc = feature_counts[s];
    const auto words = train.rows[r].words();
    for (std::size_t w = 0; w < words.size(); ++w) {
      for (auto word = words[w]; word != 0; word &= word - 1) ++fc[w * 64 + static_cast<std::size_t>(std::countr_zero(word))];
    }
  }
  return std::make_shared<NaiveBayesModel>(train.senses, std::move(class_counts), std::move(feature_counts),
                                           train.num_features);
}

}  // namespace wsd
