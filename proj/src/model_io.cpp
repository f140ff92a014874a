// Versioned text format for trained models. Each model is a block
//
//   model <kind> 1
//   ...kind-specific lines...
//   end
//
// and ensembles nest their members' blocks. Reals use the shortest
// round-trip representation.

#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <fmt/format.h>

#include "wsd/ensemble.hpp"
#include "wsd/learners.hpp"

namespace wsd {

namespace {

constexpr int kVersion = 1;

void write_senses(std::ostream& out, const std::vector<std::string>& senses) {
  out << "senses " << senses.size();
  for (const auto& s : senses) {
    if (s.empty() || s.find_first_of(" \t\r\n") != std::string::npos) {
      throw std::invalid_argument("sense label '" + s + "' cannot be serialized");
    }
    out << ' ' << s;
  }
  out << '\n';
}

template <class T>
void write_list(std::ostream& out, const char* key, const std::vector<T>& v) {
  out << key;
  for (const auto& x : v) out << ' ' << x;
  out << '\n';
}

class Reader {
public:
  explicit Reader(std::istream& in) : in_(in) {}

  // Next non-empty line split on whitespace; the first word must be `key`.
  std::istringstream expect(const std::string& key) {
    std::string line;
    while (std::getline(in_, line)) {
      ++line_no_;
      if (line.find_first_not_of(" \t\r") != std::string::npos) break;
      line.clear();
    }
    if (line.empty()) fail("unexpected end of model, wanted '" + key + "'");
    std::istringstream ss(line);
    std::string word;
    ss >> word;
    if (word != key) fail("expected '" + key + "', found '" + word + "'");
    return ss;
  }

  template <class T>
  T value(std::istringstream& ss, const char* what) {
    T v{};
    if (!(ss >> v)) fail(std::string("bad ") + what);
    return v;
  }

  template <class T>
  std::vector<T> rest(std::istringstream& ss, std::size_t n, const char* what) {
    std::vector<T> out(n);
    for (auto& x : out) x = value<T>(ss, what);
    std::string extra;
    if (ss >> extra) fail(std::string("trailing data after ") + what);
    return out;
  }

  std::vector<std::string> senses() {
    auto ss = expect("senses");
    auto n = value<std::size_t>(ss, "sense count");
    return rest<std::string>(ss, n, "sense");
  }

  std::size_t features() {
    auto ss = expect("features");
    return value<std::size_t>(ss, "feature count");
  }

  void end() { expect("end"); }

  [[noreturn]] void fail(const std::string& msg) const { throw ParseError("model: " + msg, line_no_); }

  std::istream& stream() { return in_; }

private:
  std::istream& in_;
  std::size_t line_no_ = 0;
};

ClassifierPtr read_model(Reader& r);

}  // namespace

void NaiveBayesModel::save(std::ostream& out) const {
  out << "model naive_bayes " << kVersion << '\n';
  out << "features " << num_features_ << '\n';
  write_senses(out, senses_);
  write_list(out, "class_counts", class_counts_);
  for (const auto& fc : feature_counts_) write_list(out, "feature_counts", fc);
  out << "end\n";
}

void DecisionTreeModel::save(std::ostream& out) const {
  out << "model decision_tree " << kVersion << '\n';
  out << "features " << num_features_ << '\n';
  write_senses(out, senses_);
  out << fmt::format("config {} {} {}\n", config_.confidence_factor, config_.min_leaf, config_.prune ? 1 : 0);
  out << "nodes " << nodes_.size() << '\n';
  for (const auto& n : nodes_) {
    out << "node " << n.feature << ' ' << n.child[0] << ' ' << n.child[1];
    for (auto c : n.counts) out << ' ' << c;
    out << '\n';
  }
  out << "end\n";
}

void DecisionStumpModel::save(std::ostream& out) const {
  out << "model decision_stump " << kVersion << '\n';
  out << "features " << num_features_ << '\n';
  write_senses(out, senses_);
  out << "split " << (feature_ ? static_cast<long long>(*feature_) : -1LL) << '\n';
  if (feature_) {
    write_list(out, "branch0", branch_[0]);
    write_list(out, "branch1", branch_[1]);
  }
  write_list(out, "overall", overall_);
  out << "end\n";
}

void KnnModel::save(std::ostream& out) const {
  out << "model knn " << kVersion << '\n';
  out << "features " << num_features_ << '\n';
  write_senses(out, senses_);
  out << "k " << k_ << '\n';
  out << "rows " << rows_.size() << '\n';
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    out << "row " << labels_[i] << ' ' << (rows_[i].words().empty() ? "-" : rows_[i].to_hex()) << '\n';
  }
  out << "end\n";
}

void MajorityModel::save(std::ostream& out) const {
  out << "model majority " << kVersion << '\n';
  out << "features " << num_features_ << '\n';
  out << "scores " << dist_.size() << '\n';
  for (const auto& [sense, p] : dist_.scores()) out << fmt::format("score {} {}\n", sense, p);
  out << "end\n";
}

void BaggedEnsemble::save(std::ostream& out) const {
  out << "model bagged " << kVersion << '\n';
  out << "seed " << seed_ << '\n';
  out << "members " << members_.size() << '\n';
  for (const auto& m : members_) m->save(out);
  out << "end\n";
}

void VotingEnsemble::save(std::ostream& out) const {
  out << "model vote " << kVersion << '\n';
  out << "mode " << to_string(mode_) << '\n';
  out << "members " << members_.size() << '\n';
  for (const auto& m : members_) m->save(out);
  out << "end\n";
}

namespace {

ClassifierPtr read_model(Reader& r) {
  auto head = r.expect("model");
  const auto kind = r.value<std::string>(head, "model kind");
  const auto version = r.value<int>(head, "model version");
  if (version != kVersion) r.fail(fmt::format("unsupported {} model version {}", kind, version));

  if (kind == "naive_bayes") {
    const auto F = r.features();
    auto senses = r.senses();
    auto cc = r.expect("class_counts");
    auto class_counts = r.rest<std::uint64_t>(cc, senses.size(), "class count");
    std::vector<std::vector<std::uint64_t>> fcs;
    for (std::size_t s = 0; s < senses.size(); ++s) {
      auto line = r.expect("feature_counts");
      fcs.push_back(r.rest<std::uint64_t>(line, F, "feature count"));
    }
    r.end();
    return std::make_shared<NaiveBayesModel>(std::move(senses), std::move(class_counts), std::move(fcs), F);
  }
  if (kind == "decision_tree") {
    const auto F = r.features();
    auto senses = r.senses();
    auto cfg_line = r.expect("config");
    TreeConfig cfg;
    cfg.confidence_factor = r.value<double>(cfg_line, "confidence factor");
    cfg.min_leaf = r.value<std::size_t>(cfg_line, "min_leaf");
    cfg.prune = r.value<int>(cfg_line, "prune flag") != 0;
    auto nodes_line = r.expect("nodes");
    const auto n = r.value<std::size_t>(nodes_line, "node count");
    std::vector<DecisionTreeModel::Node> nodes(n);
    for (auto& node : nodes) {
      auto line = r.expect("node");
      node.feature = r.value<std::int32_t>(line, "node feature");
      node.child[0] = r.value<std::uint32_t>(line, "node child");
      node.child[1] = r.value<std::uint32_t>(line, "node child");
      node.counts = r.rest<std::uint64_t>(line, senses.size(), "node count");
    }
    r.end();
    return std::make_shared<DecisionTreeModel>(std::move(senses), std::move(nodes), F, cfg);
  }
  if (kind == "decision_stump") {
    const auto F = r.features();
    auto senses = r.senses();
    auto split_line = r.expect("split");
    const auto f = r.value<long long>(split_line, "split feature");
    std::optional<std::size_t> feature;
    std::vector<std::uint64_t> b0, b1;
    if (f >= 0) {
      feature = static_cast<std::size_t>(f);
      auto l0 = r.expect("branch0");
      b0 = r.rest<std::uint64_t>(l0, senses.size(), "branch count");
      auto l1 = r.expect("branch1");
      b1 = r.rest<std::uint64_t>(l1, senses.size(), "branch count");
    }
    auto lo = r.expect("overall");
    auto overall = r.rest<std::uint64_t>(lo, senses.size(), "class count");
    r.end();
    return std::make_shared<DecisionStumpModel>(std::move(senses), feature, std::move(b0), std::move(b1),
                                                std::move(overall), F);
  }
  if (kind == "knn") {
    const auto F = r.features();
    auto senses = r.senses();
    auto k_line = r.expect("k");
    const auto k = r.value<std::size_t>(k_line, "k");
    auto rows_line = r.expect("rows");
    const auto n = r.value<std::size_t>(rows_line, "row count");
    std::vector<BitVector> rows;
    std::vector<std::uint32_t> labels;
    for (std::size_t i = 0; i < n; ++i) {
      auto line = r.expect("row");
      labels.push_back(r.value<std::uint32_t>(line, "row label"));
      const auto hex = r.value<std::string>(line, "row bits");
      try {
        rows.push_back(BitVector::from_hex(F, hex == "-" ? std::string() : hex));
      } catch (const std::invalid_argument& e) {
        r.fail(e.what());
      }
    }
    r.end();
    return std::make_shared<KnnModel>(std::move(senses), std::move(rows), std::move(labels), F, k);
  }
  if (kind == "majority") {
    const auto F = r.features();
    auto n_line = r.expect("scores");
    const auto n = r.value<std::size_t>(n_line, "score count");
    SenseDistribution d;
    for (std::size_t i = 0; i < n; ++i) {
      auto line = r.expect("score");
      const auto sense = r.value<std::string>(line, "sense");
      d.add(sense, r.value<double>(line, "score"));
    }
    r.end();
    return std::make_shared<MajorityModel>(std::move(d), F);
  }
  if (kind == "bagged" || kind == "vote") {
    std::uint64_t seed = 0;
    VoteMode mode = VoteMode::weighted;
    if (kind == "bagged") {
      auto line = r.expect("seed");
      seed = r.value<std::uint64_t>(line, "seed");
    } else {
      auto line = r.expect("mode");
      const auto m = r.value<std::string>(line, "mode");
      if (m == "majority") {
        mode = VoteMode::majority;
      } else if (m != "weighted") {
        r.fail("unknown vote mode '" + m + "'");
      }
    }
    auto m_line = r.expect("members");
    const auto n = r.value<std::size_t>(m_line, "member count");
    std::vector<ClassifierPtr> members;
    for (std::size_t i = 0; i < n; ++i) members.push_back(read_model(r));
    r.end();
    if (kind == "bagged") return std::make_shared<BaggedEnsemble>(std::move(members), seed);
    return std::make_shared<VotingEnsemble>(std::move(members), mode);
  }
  r.fail("unknown model kind '" + kind + "'");
}

}  // namespace

ClassifierPtr load_classifier(std::istream& in) {
  Reader r(in);
  return read_model(r);
}

}  // namespace wsd
