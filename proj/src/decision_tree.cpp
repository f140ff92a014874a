#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <stdexcept>

#include "wsd/kernels.hpp"
#include "wsd/learners.hpp"

namespace wsd {

namespace {

constexpr double kEpsilon = 1e-3;

double entropy(std::span<const std::uint64_t> counts, double total) {
  if (total <= 0.0) return 0.0;
  double h = 0.0;
  for (auto c : counts) {
    if (c == 0) continue;
    const double p = static_cast<double>(c) / total;
    h -= p * std::log2(p);
  }
  return h;
}

std::uint64_t sum(std::span<const std::uint64_t> v) { return std::accumulate(v.begin(), v.end(), std::uint64_t{0}); }

std::uint64_t majority_count(std::span<const std::uint64_t> v) { return v.empty() ? 0 : *std::max_element(v.begin(), v.end()); }

SenseDistribution laplace(const std::vector<std::string>& senses, std::span<const std::uint64_t> counts) {
  const double denom = static_cast<double>(sum(counts) + senses.size());
  SenseDistribution d;
  for (std::size_t s = 0; s < senses.size(); ++s) d.add(senses[s], static_cast<double>(counts[s] + 1) / denom);
  return d;
}

// Rows reaching a node, one mask per sense.
struct NodeRows {
  std::vector<BitVector> by_class;
  std::vector<std::uint64_t> counts;
  std::uint64_t total = 0;
};

struct Candidate {
  std::size_t feature = 0;
  double gain = 0.0;
  double ratio = 0.0;
};

class SplitFinder {
public:
  SplitFinder(const TrainingSet& ts, std::size_t min_leaf) : ts_(ts), min_leaf_(std::max<std::size_t>(min_leaf, 1)) {
    columns_.assign(ts.num_features, BitVector(ts.size()));
    for (std::size_t r = 0; r < ts.size(); ++r) {
      const auto words = ts.rows[r].words();
      for (std::size_t w = 0; w < words.size(); ++w) {
        for (auto word = words[w]; word != 0; word &= word - 1) {
          columns_[w * 64 + static_cast<std::size_t>(std::countr_zero(word))].set(r);
        }
      }
    }
  }

  NodeRows root() const {
    NodeRows n;
    n.by_class.assign(ts_.senses.size(), BitVector(ts_.size()));
    n.counts.assign(ts_.senses.size(), 0);
    for (std::size_t r = 0; r < ts_.size(); ++r) {
      n.by_class[ts_.labels[r]].set(r);
      ++n.counts[ts_.labels[r]];
    }
    n.total = ts_.size();
    return n;
  }

  // Gain-ratio choice among features whose two branches both hold at least
  // min_leaf rows, restricted to features with at least average gain.
  std::optional<Candidate> best(const NodeRows& node) const {
    const double total = static_cast<double>(node.total);
    const double base = entropy(node.counts, total);
    const std::size_t S = node.counts.size();
    std::vector<Candidate> possible;
    std::vector<std::uint64_t> on(S), off(S);
    for (std::size_t f = 0; f < columns_.size(); ++f) {
      std::uint64_t n_on = 0;
      for (std::size_t s = 0; s < S; ++s) {
        on[s] = node.counts[s] == 0 ? 0 : simd::and_popcount(columns_[f].words(), node.by_class[s].words());
        off[s] = node.counts[s] - on[s];
        n_on += on[s];
      }
      const std::uint64_t n_off = node.total - n_on;
      if (n_on < min_leaf_ || n_off < min_leaf_) continue;
      const double w_on = static_cast<double>(n_on) / total;
      const double w_off = static_cast<double>(n_off) / total;
      const double gain = base - w_on * entropy(on, static_cast<double>(n_on)) - w_off * entropy(off, static_cast<double>(n_off));
      const double split_info = -w_on * std::log2(w_on) - w_off * std::log2(w_off);
      possible.push_back({f, gain, split_info > kEpsilon ? gain / split_info : 0.0});
    }
    if (possible.empty()) return std::nullopt;
    double avg = 0.0;
    for (const auto& p : possible) avg += p.gain;
    avg /= static_cast<double>(possible.size());
    std::optional<Candidate> chosen;
    for (const auto& p : possible) {
      if (p.gain < avg - kEpsilon) continue;
      if (!chosen || p.ratio > chosen->ratio) chosen = p;
    }
    return chosen;
  }

  std::pair<NodeRows, NodeRows> partition(const NodeRows& node, std::size_t feature) const {
    NodeRows off = node, on = node;
    for (std::size_t s = 0; s < node.counts.size(); ++s) {
      on.by_class[s].and_with(columns_[feature]);
      off.by_class[s].and_not_with(columns_[feature]);
      on.counts[s] = on.by_class[s].count();
      off.counts[s] = node.counts[s] - on.counts[s];
    }
    on.total = sum(on.counts);
    off.total = node.total - on.total;
    return {std::move(off), std::move(on)};
  }

  std::size_t min_leaf() const { return min_leaf_; }

private:
  const TrainingSet& ts_;
  std::size_t min_leaf_;
  std::vector<BitVector> columns_;
};

using Node = DecisionTreeModel::Node;

std::uint32_t grow(const SplitFinder& finder, const NodeRows& rows, std::vector<Node>& nodes) {
  const auto index = static_cast<std::uint32_t>(nodes.size());
  nodes.push_back({-1, {0, 0}, rows.counts});
  const bool pure = majority_count(rows.counts) == rows.total;
  if (pure || rows.total < 2 * finder.min_leaf()) return index;
  auto split = finder.best(rows);
  if (!split) return index;
  auto [off, on] = finder.partition(rows, split->feature);
  const auto c0 = grow(finder, off, nodes);
  const auto c1 = grow(finder, on, nodes);
  nodes[index].feature = static_cast<std::int32_t>(split->feature);
  nodes[index].child[0] = c0;
  nodes[index].child[1] = c1;
  return index;
}

// Returns the estimated error count of the (possibly collapsed) subtree.
double prune(std::vector<Node>& nodes, std::uint32_t index, double cf) {
  auto& node = nodes[index];
  const double n = static_cast<double>(sum(node.counts));
  const double errors = n - static_cast<double>(majority_count(node.counts));
  const double as_leaf = errors + pessimistic_extra_errors(n, errors, cf);
  if (node.feature < 0) return as_leaf;
  const double as_tree = prune(nodes, node.child[0], cf) + prune(nodes, node.child[1], cf);
  if (as_leaf <= as_tree + 0.1) {
    nodes[index].feature = -1;
    return as_leaf;
  }
  return as_tree;
}

// Drops nodes no longer reachable from the root, preserving pre-order.
std::vector<Node> compact(const std::vector<Node>& nodes) {
  std::vector<Node> out;
  std::function<std::uint32_t(std::uint32_t)> copy = [&](std::uint32_t i) -> std::uint32_t {
    const auto at = static_cast<std::uint32_t>(out.size());
    out.push_back(nodes[i]);
    if (nodes[i].feature < 0) {
      out[at].child[0] = out[at].child[1] = 0;
      return at;
    }
    const auto c0 = copy(nodes[i].child[0]);
    const auto c1 = copy(nodes[i].child[1]);
    out[at].child[0] = c0;
    out[at].child[1] = c1;
    return at;
  };
  copy(0);
  return out;
}

}  // namespace

double pessimistic_extra_errors(double n, double errors, double cf) {
  if (!(cf > 0.0 && cf < 1.0)) throw std::invalid_argument("confidence factor must lie in (0, 1)");
  if (n <= 0.0) return 0.0;
  // Standard normal deviates for one-sided confidence levels, interpolated.
  static constexpr double kLevel[] = {0, 0.001, 0.005, 0.01, 0.05, 0.10, 0.20, 0.40, 1.00};
  static constexpr double kDev[] = {4.0, 3.09, 2.58, 2.33, 1.65, 1.28, 0.84, 0.25, 0.00};
  std::size_t i = 0;
  while (cf > kLevel[i]) ++i;
  const double dev = kDev[i - 1] + (kDev[i] - kDev[i - 1]) * (cf - kLevel[i - 1]) / (kLevel[i] - kLevel[i - 1]);
  const double coeff = dev * dev;

  if (errors < 1e-6) return n * (1.0 - std::exp(std::log(cf) / n));
  if (errors < 0.9999) {
    const double zero = n * (1.0 - std::exp(std::log(cf) / n));
    return zero + errors * (pessimistic_extra_errors(n, 1.0, cf) - zero);
  }
  if (errors + 0.5 >= n) return 0.67 * (n - errors);
  const double e = errors + 0.5;
  const double upper = (e + coeff / 2 + std::sqrt(coeff * (e * (1 - e / n) + coeff / 4))) / (n + coeff);
  return n * upper - errors;
}

DecisionTreeModel::DecisionTreeModel(std::vector<std::string> senses, std::vector<Node> nodes, std::size_t num_features,
                                     TreeConfig config)
    : senses_(std::move(senses)), nodes_(std::move(nodes)), num_features_(num_features), config_(config) {
  if (nodes_.empty()) throw std::invalid_argument("DecisionTreeModel: no nodes");
  if (senses_.empty()) throw std::invalid_argument("DecisionTreeModel: no senses");
  for (const auto& n : nodes_) {
    if (n.counts.size() != senses_.size()) throw std::invalid_argument("DecisionTreeModel: leaf count width");
    if (n.feature >= 0) {
      if (static_cast<std::size_t>(n.feature) >= num_features_ || n.child[0] >= nodes_.size() ||
          n.child[1] >= nodes_.size()) {
        throw std::invalid_argument("DecisionTreeModel: dangling node reference");
      }
    }
  }
}

SenseDistribution DecisionTreeModel::predict(const BitVector& v) const {
  check_length(v);
  const Node* n = &nodes_[0];
  while (n->feature >= 0) n = &nodes_[n->child[v.test(static_cast<std::size_t>(n->feature)) ? 1 : 0]];
  return laplace(senses_, n->counts);
}

std::size_t DecisionTreeModel::depth() const {
  std::function<std::size_t(std::uint32_t)> walk = [&](std::uint32_t i) -> std::size_t {
    const auto& n = nodes_[i];
    return n.feature < 0 ? 0 : 1 + std::max(walk(n.child[0]), walk(n.child[1]));
  };
  return walk(0);
}

std::size_t DecisionTreeModel::leaf_count() const {
  std::function<std::size_t(std::uint32_t)> walk = [&](std::uint32_t i) -> std::size_t {
    const auto& n = nodes_[i];
    return n.feature < 0 ? 1 : walk(n.child[0]) + walk(n.child[1]);
  };
  return walk(0);
}

std::shared_ptr<const DecisionTreeModel> train_decision_tree(const TrainingSet& train, const TreeConfig& config) {
  if (train.empty()) throw std::invalid_argument("train_decision_tree: empty training set");
  SplitFinder finder(train, config.min_leaf);
  std::vector<Node> nodes;
  grow(finder, finder.root(), nodes);
  if (config.prune) {
    prune(nodes, 0, config.confidence_factor);
    nodes = compact(nodes);
  }
  return std::make_shared<DecisionTreeModel>(train.senses, std::move(nodes), train.num_features, config);
}

DecisionStumpModel::DecisionStumpModel(std::vector<std::string> senses, std::optional<std::size_t> feature,
                                       std::vector<std::uint64_t> branch0, std::vector<std::uint64_t> branch1,
                                       std::vector<std::uint64_t> overall, std::size_t num_features)
    : senses_(std::move(senses)),
      feature_(feature),
      branch_{std::move(branch0), std::move(branch1)},
      overall_(std::move(overall)),
      num_features_(num_features) {
  if (senses_.empty() || overall_.size() != senses_.size()) throw std::invalid_argument("DecisionStumpModel: counts");
  if (feature_ && (*feature_ >= num_features_ || branch_[0].size() != senses_.size() ||
                   branch_[1].size() != senses_.size())) {
    throw std::invalid_argument("DecisionStumpModel: bad split");
  }
}

SenseDistribution DecisionStumpModel::predict(const BitVector& v) const {
  check_length(v);
  if (!feature_) return laplace(senses_, overall_);
  return laplace(senses_, branch_[v.test(*feature_) ? 1 : 0]);
}

std::shared_ptr<const DecisionStumpModel> train_decision_stump(const TrainingSet& train, std::size_t min_leaf) {
  if (train.empty()) throw std::invalid_argument("train_decision_stump: empty training set");
  SplitFinder finder(train, min_leaf);
  const auto root = finder.root();
  std::optional<Candidate> split;
  if (majority_count(root.counts) != root.total) split = finder.best(root);
  if (!split || !(split->gain > 1e-12)) {
    return std::make_shared<DecisionStumpModel>(train.senses, std::nullopt, std::vector<std::uint64_t>{},
                                                std::vector<std::uint64_t>{}, root.counts, train.num_features);
  }
  auto [off, on] = finder.partition(root, split->feature);
  return std::make_shared<DecisionStumpModel>(train.senses, split->feature, off.counts, on.counts, root.counts,
                                              train.num_features);
}

}  // namespace wsd
