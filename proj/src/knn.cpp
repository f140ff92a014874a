#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "wsd/kernels.hpp"
#include "wsd/learners.hpp"

namespace wsd {

KnnModel::KnnModel(std::vector<std::string> senses, std::vector<BitVector> rows, std::vector<std::uint32_t> labels,
                   std::size_t num_features, std::size_t k)
    : senses_(std::move(senses)), rows_(std::move(rows)), labels_(std::move(labels)), num_features_(num_features), k_(k) {
  if (rows_.empty()) throw std::invalid_argument("KnnModel: no training vectors");
  if (labels_.size() != rows_.size()) throw std::invalid_argument("KnnModel: label count mismatch");
  if (k_ < 1 || k_ > rows_.size()) throw std::invalid_argument("KnnModel: k must lie in [1, number of rows]");
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    if (rows_[i].size() != num_features_) throw std::invalid_argument("KnnModel: row length mismatch");
    if (labels_[i] >= senses_.size()) throw std::invalid_argument("KnnModel: label out of range");
  }
}

SenseDistribution KnnModel::predict(const BitVector& v) const {
  check_length(v);
  std::vector<std::pair<std::uint64_t, std::size_t>> dist(rows_.size());
  for (std::size_t i = 0; i < rows_.size(); ++i) dist[i] = {simd::hamming(v.words(), rows_[i].words()), i};
  // Pairs compare by distance, then training index.
  std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k_), dist.end());
  std::vector<std::size_t> votes(senses_.size(), 0);
  for (std::size_t j = 0; j < k_; ++j) ++votes[labels_[dist[j].second]];
  SenseDistribution d;
  for (std::size_t s = 0; s < votes.size(); ++s) {
    if (votes[s] > 0) d.add(senses_[s], static_cast<double>(votes[s]) / static_cast<double>(k_));
  }
  return d;
}

std::shared_ptr<const KnnModel> train_knn(const TrainingSet& train, std::size_t k) {
  if (train.empty()) throw std::invalid_argument("train_knn: empty training set");
  return std::make_shared<KnnModel>(train.senses, train.rows, train.labels, train.num_features, k);
}

}  // namespace wsd
