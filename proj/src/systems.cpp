#include "wsd/systems.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <fmt/format.h>

#include "hash.hpp"
#include "wsd/rng.hpp"

namespace wsd {

std::string_view to_string(Language l) { return l == Language::en ? "en" : "es"; }

Language parse_language(std::string_view s) {
  if (s == "en" || s == "english") return Language::en;
  if (s == "es" || s == "spanish") return Language::es;
  throw std::invalid_argument("unknown language '" + std::string(s) + "' (expected en or es)");
}

std::string_view to_string(LearnerKind k) {
  switch (k) {
    case LearnerKind::naive_bayes: return "naive_bayes";
    case LearnerKind::decision_tree: return "decision_tree";
    case LearnerKind::bagged_tree: return "bagged_tree";
    case LearnerKind::decision_stump: return "decision_stump";
    case LearnerKind::nearest_neighbor: return "nearest_neighbor";
  }
  return "?";
}

std::string_view to_string(Combine c) {
  switch (c) {
    case Combine::none: return "none";
    case Combine::weighted: return "weighted";
    case Combine::majority: return "majority";
  }
  return "?";
}

namespace {

struct Pair {
  const char* en;
  const char* es;
};

// Registry order; the last entry is the kitchen-sink ensemble.
constexpr Pair kPairs[] = {
    {"duluth1", "duluth6"}, {"duluth2", "duluth7"}, {"duluth3", "duluth8"}, {"duluth4", "duluth9"},
    {"duluth5", "duluth10"}, {"duluthA", "duluthX"}, {"duluthB", "duluthY"}, {"duluthC", "duluthZ"},
};

std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::size_t pair_index(std::string_view name) {
  const auto want = lower(name);
  for (std::size_t i = 0; i < std::size(kPairs); ++i) {
    if (want == lower(kPairs[i].en) || want == lower(kPairs[i].es)) return i;
  }
  throw std::invalid_argument("unknown system '" + std::string(name) + "'");
}

FeatureSpec bigrams() { return {FeatureKind::bigram, 2, g2::p01, 0}; }
FeatureSpec cooccurrences() { return {FeatureKind::cooccurrence, 2, g2::p10, 0}; }
FeatureSpec unigrams(std::size_t min_freq) { return {FeatureKind::unigram, min_freq, 0.0, 0}; }

}  // namespace

std::vector<std::string> system_names(Language language) {
  std::vector<std::string> out;
  for (const auto& p : kPairs) out.emplace_back(language == Language::en ? p.en : p.es);
  return out;
}

SystemConfig build_system(std::string_view name, Language language) {
  const auto idx = pair_index(name);
  const bool es = language == Language::es;
  SystemConfig cfg;
  cfg.name = es ? kPairs[idx].es : kPairs[idx].en;
  cfg.language = language;
  switch (idx) {
    case 0:  // three Naive Bayes models, one per feature set
      cfg.components = {{{bigrams()}, {LearnerKind::naive_bayes}},
                        {{unigrams(5)}, {LearnerKind::naive_bayes}},
                        {{cooccurrences()}, {LearnerKind::naive_bayes}}};
      cfg.combine = Combine::weighted;
      break;
    case 1:
      cfg.components = {{{bigrams()}, {LearnerKind::bagged_tree}}};
      break;
    case 2:  // one bagged tree per feature set
      cfg.components = {{{bigrams()}, {LearnerKind::bagged_tree}},
                        {{unigrams(5)}, {LearnerKind::bagged_tree}},
                        {{cooccurrences()}, {LearnerKind::bagged_tree}}};
      cfg.combine = Combine::majority;
      break;
    case 3:
      cfg.components = {{{unigrams(es ? 2 : 5)}, {LearnerKind::naive_bayes}}};
      break;
    case 4:
      cfg.components = {{{bigrams(), cooccurrences()}, {LearnerKind::bagged_tree}}};
      break;
    case 5:
      cfg.components = {{{{FeatureKind::gapped_bigram, 2, es ? 0.0 : g2::p001, 2}},
                         {LearnerKind::bagged_tree, LearnerKind::naive_bayes, LearnerKind::nearest_neighbor}}};
      break;
    case 6:
      cfg.components = {{{bigrams(), cooccurrences()}, {LearnerKind::decision_stump}}};
      break;
    case 7:
      for (std::size_t i = 0; i + 1 < std::size(kPairs); ++i) {
        cfg.members.push_back(build_system(kPairs[i].en, language));
      }
      cfg.combine = Combine::weighted;
      break;
  }
  return cfg;
}

namespace {

std::size_t parse_size(std::string_view key, std::string_view v) {
  try {
    std::size_t used = 0;
    auto n = std::stoull(std::string(v), &used);
    if (used == v.size()) return static_cast<std::size_t>(n);
  } catch (const std::exception&) {
  }
  throw std::invalid_argument(fmt::format("override {}: '{}' is not a count", key, v));
}

double parse_real(std::string_view key, std::string_view v) {
  try {
    std::size_t used = 0;
    auto x = std::stod(std::string(v), &used);
    if (used == v.size()) return x;
  } catch (const std::exception&) {
  }
  throw std::invalid_argument(fmt::format("override {}: '{}' is not a number", key, v));
}

bool parse_flag(std::string_view key, std::string_view v) {
  if (v == "1" || v == "true" || v == "yes") return true;
  if (v == "0" || v == "false" || v == "no") return false;
  throw std::invalid_argument(fmt::format("override {}: '{}' is not a boolean", key, v));
}

// Returns true when the key was recognized.
bool apply_local(SystemConfig& cfg, std::string_view key, std::string_view value) {
  if (key == "bagging.replicates") {
    cfg.replicates = parse_size(key, value);
    if (cfg.replicates == 0) throw std::invalid_argument("bagging.replicates must be positive");
  } else if (key == "tree.confidence_factor") {
    cfg.tree.confidence_factor = parse_real(key, value);
    if (!(cfg.tree.confidence_factor > 0.0 && cfg.tree.confidence_factor < 1.0)) {
      throw std::invalid_argument("tree.confidence_factor must lie in (0, 1)");
    }
  } else if (key == "tree.min_leaf") {
    cfg.tree.min_leaf = parse_size(key, value);
  } else if (key == "tree.prune") {
    cfg.tree.prune = parse_flag(key, value);
  } else if (key == "knn.k") {
    cfg.knn_k = parse_size(key, value);
    if (cfg.knn_k == 0) throw std::invalid_argument("knn.k must be positive");
  } else if (key == "cooccurrence.stoplist") {
    cfg.selection.stop_cooccurrences = parse_flag(key, value);
  } else {
    auto dot = key.find('.');
    if (dot == std::string_view::npos) return false;
    FeatureKind kind;
    try {
      kind = parse_feature_kind(key.substr(0, dot));
    } catch (const std::invalid_argument&) {
      return false;
    }
    auto param = key.substr(dot + 1);
    if (param != "min_freq" && param != "g2_min" && param != "max_gap") return false;
    // Values are checked even when no feature rule of this kind is present.
    std::size_t size_value = 0;
    double real_value = 0.0;
    if (param == "g2_min") {
      real_value = parse_real(key, value);
      if (real_value < 0.0) throw std::invalid_argument("g2_min must be >= 0");
    } else {
      size_value = parse_size(key, value);
    }
    if (param == "max_gap") {
      if (kind != FeatureKind::gapped_bigram) throw std::invalid_argument("max_gap applies to gapped_bigram only");
      if (size_value > 2) throw std::invalid_argument("gapped_bigram.max_gap must be 0..2");
    }
    for (auto& comp : cfg.components) {
      for (auto& spec : comp.features) {
        if (spec.kind != kind) continue;
        if (param == "min_freq") {
          spec.min_freq = size_value;
        } else if (param == "g2_min") {
          spec.g2_min = real_value;
        } else {
          spec.max_gap = static_cast<int>(size_value);
        }
      }
    }
  }
  return true;
}

// Keys may be scoped to one system, e.g. "duluth2.bigram.g2_min"; scoped
// keys also reach matching kitchen-sink members.
bool apply_recursive(SystemConfig& cfg, std::string_view key, std::string_view value) {
  auto dot = key.find('.');
  if (dot != std::string_view::npos && lower(key.substr(0, std::min<std::size_t>(dot, 6))) == "duluth") {
    const auto target = pair_index(key.substr(0, dot));
    const auto rest = key.substr(dot + 1);
    bool known = true;
    if (pair_index(cfg.name) == target) known = apply_local(cfg, rest, value);
    for (auto& m : cfg.members) known = apply_recursive(m, key, value) && known;
    return known;
  }
  bool known = apply_local(cfg, key, value);
  for (auto& m : cfg.members) known = apply_recursive(m, key, value) && known;
  return known;
}

}  // namespace

void apply_override(SystemConfig& cfg, std::string_view key, std::string_view value) {
  if (!apply_recursive(cfg, key, value)) throw std::invalid_argument("unknown override key '" + std::string(key) + "'");
}

namespace {

void describe_into(const SystemConfig& cfg, std::string& out, const std::string& indent) {
  out += fmt::format("{}system {} {}\n", indent, cfg.name, to_string(cfg.language));
  out += fmt::format("{}combine {}\n", indent, to_string(cfg.combine));
  for (std::size_t i = 0; i < cfg.components.size(); ++i) {
    const auto& c = cfg.components[i];
    out += fmt::format("{}component {}\n", indent, i);
    for (const auto& f : c.features) {
      out += fmt::format("{}  features {} min_freq={} g2_min={} max_gap={}\n", indent, to_string(f.kind), f.min_freq,
                         f.g2_min, f.max_gap);
    }
    for (auto l : c.learners) out += fmt::format("{}  learner {}\n", indent, to_string(l));
  }
  out += fmt::format("{}bagging.replicates {}\n", indent, cfg.replicates);
  out += fmt::format("{}tree cf={} min_leaf={} prune={}\n", indent, cfg.tree.confidence_factor, cfg.tree.min_leaf,
                     cfg.tree.prune);
  out += fmt::format("{}knn.k {}\n", indent, cfg.knn_k);
  out += fmt::format("{}cooccurrence.stoplist {}\n", indent, cfg.selection.stop_cooccurrences);
  for (const auto& m : cfg.members) describe_into(m, out, indent + "  ");
}

}  // namespace

std::string describe(const SystemConfig& cfg) {
  std::string out;
  describe_into(cfg, out, "");
  return out;
}

std::string config_digest(const SystemConfig& cfg) { return "cfg-" + hex64(fnv1a64(describe(cfg))); }

// --- training ----------------------------------------------------------------

namespace {

ClassifierPtr train_learner(LearnerKind kind, const SystemConfig& cfg, const TrainingSet& ts, std::uint64_t seed) {
  switch (kind) {
    case LearnerKind::naive_bayes:
      return train_naive_bayes(ts);
    case LearnerKind::decision_tree:
      return train_decision_tree(ts, cfg.tree);
    case LearnerKind::bagged_tree: {
      const auto tree = cfg.tree;
      return bag([tree](const TrainingSet& t) -> ClassifierPtr { return train_decision_tree(t, tree); }, ts, seed,
                 cfg.replicates);
    }
    case LearnerKind::decision_stump:
      return train_decision_stump(ts, cfg.tree.min_leaf);
    case LearnerKind::nearest_neighbor:
      return train_knn(ts, std::min(cfg.knn_k, ts.size()));
  }
  throw std::logic_error("unhandled learner");
}

TrainingSet label_only(std::span<const Instance> train) {
  std::vector<FeatureVector> vs;
  vs.reserve(train.size());
  for (const auto& inst : train) {
    FeatureVector v{BitVector(0), std::nullopt, inst.id};
    if (!inst.gold_senses.empty()) v.label = inst.gold_senses.front();
    vs.push_back(std::move(v));
  }
  return TrainingSet::from_vectors(vs, 0);
}

}  // namespace

TrainedSystem train_system(const SystemConfig& cfg, std::string_view lexelt, std::span<const Instance> train,
                           const StopList& stoplist, std::uint64_t seed) {
  if (train.empty()) throw std::invalid_argument(fmt::format("{}: no training instances for '{}'", cfg.name, lexelt));
  TrainedSystem sys;
  sys.name = cfg.name;
  sys.lexelt = std::string(lexelt);
  sys.config_digest = config_digest(cfg);
  sys.seed = seed;
  sys.combine = cfg.combine;

  // Every member gets the caller's seed so a kitchen-sink member matches
  // the stand-alone run of the same system.
  for (const auto& m : cfg.members) sys.members.push_back(train_system(m, lexelt, train, stoplist, seed));

  for (std::size_t i = 0; i < cfg.components.size(); ++i) {
    const auto& spec = cfg.components[i];
    TrainedComponent comp;
    for (const auto& fspec : spec.features) comp.features.append(select_features(train, fspec, stoplist, cfg.selection));

    if (comp.features.size() == 0) {
      comp.fallback = true;
      comp.model = train_majority(label_only(train));
      sys.components.push_back(std::move(comp));
      continue;
    }

    comp.featurizer = std::make_shared<const Featurizer>(comp.features);
    std::vector<FeatureVector> vs;
    vs.reserve(train.size());
    for (const auto& inst : train) vs.push_back((*comp.featurizer)(inst, true));
    const auto ts = TrainingSet::from_vectors(vs, comp.features.size());

    const auto comp_seed = Rng::stream(seed, i).next();
    std::vector<ClassifierPtr> models;
    for (std::size_t j = 0; j < spec.learners.size(); ++j) {
      models.push_back(train_learner(spec.learners[j], cfg, ts, Rng::stream(comp_seed, j).next()));
    }
    if (models.empty()) throw std::invalid_argument(cfg.name + ": component without learners");
    comp.model = models.size() == 1 ? models.front()
                                    : std::make_shared<const VotingEnsemble>(std::move(models), VoteMode::weighted);
    sys.components.push_back(std::move(comp));
  }
  if (sys.components.empty() && sys.members.empty()) throw std::invalid_argument(cfg.name + ": empty system");
  return sys;
}

Vote TrainedSystem::decide(const Instance& inst) const {
  std::vector<SenseDistribution> dists;
  dists.reserve(members.size() + components.size());
  for (const auto& m : members) dists.push_back(m.decide(inst).distribution);
  for (const auto& c : components) {
    if (c.fallback) {
      dists.push_back(c.model->predict(BitVector(0)));
    } else {
      dists.push_back(c.model->predict(c.featurizer->bits(inst)));
    }
  }
  if (dists.size() == 1 && combine == Combine::none) {
    Vote v;
    v.distribution = dists.front().normalized();
    v.label = v.distribution.argmax();
    return v;
  }
  return wsd::combine(dists, combine == Combine::majority ? VoteMode::majority : VoteMode::weighted);
}

std::vector<std::string> TrainedSystem::fallbacks() const {
  std::vector<std::string> out;
  for (const auto& m : members) {
    for (auto& f : m.fallbacks()) out.push_back(name + "/" + f);
  }
  for (std::size_t i = 0; i < components.size(); ++i) {
    if (components[i].fallback) out.push_back(fmt::format("{}/{}", name, i));
  }
  return out;
}

AnswerSet apply_system(const TrainedSystem& sys, std::span<const Instance> test) {
  AnswerSet out;
  out.lexelt = sys.lexelt;
  out.system = sys.name;
  out.metadata["config"] = sys.config_digest;
  out.metadata["seed"] = std::to_string(sys.seed);
  out.metadata["rng"] = std::string(kRngName);
  const auto fb = sys.fallbacks();
  std::string joined;
  for (const auto& f : fb) joined += (joined.empty() ? "" : ",") + f;
  out.metadata["fallback"] = joined.empty() ? "none" : joined;
  for (const auto& inst : test) {
    auto v = sys.decide(inst);
    if (!out.entries.emplace(inst.id, Answer{v.label, std::move(v.distribution)}).second) {
      throw ValidationError("duplicate test instance id '" + inst.id + "'");
    }
  }
  return out;
}

AnswerSet run_system(const SystemConfig& cfg, const LexeltDataset& ds, const StopList& stoplist, std::uint64_t seed) {
  const auto sys = train_system(cfg, ds.lexelt, ds.train, stoplist, seed);
  return apply_system(sys, ds.test);
}

// --- serialization -------------------------------------------------------------

namespace {

constexpr int kSystemVersion = 1;

Combine parse_combine(const std::string& s) {
  if (s == "none") return Combine::none;
  if (s == "weighted") return Combine::weighted;
  if (s == "majority") return Combine::majority;
  throw ParseError("system: unknown combine mode '" + s + "'", 0);
}

std::string next_line(std::istream& in, const std::string& key) {
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") != std::string::npos) break;
  }
  if (!in && line.empty()) throw ParseError("system: unexpected end of input, wanted '" + key + "'", 0);
  if (line.compare(0, key.size() + 1, key + " ") != 0) {
    throw ParseError("system: expected '" + key + "', found '" + line + "'", 0);
  }
  return line.substr(key.size() + 1);
}

std::uint64_t parse_u64(const std::string& s, const char* what) {
  try {
    std::size_t used = 0;
    auto v = std::stoull(s, &used);
    if (used == s.size()) return v;
  } catch (const std::exception&) {
  }
  throw ParseError(std::string("system: bad ") + what + " '" + s + "'", 0);
}

}  // namespace

void save_system(const TrainedSystem& sys, std::ostream& out) {
  out << "system " << kSystemVersion << ' ' << sys.name << '\n';
  out << "lexelt " << sys.lexelt << '\n';
  out << "config " << sys.config_digest << '\n';
  out << "seed " << sys.seed << '\n';
  out << "combine " << to_string(sys.combine) << '\n';
  out << "members " << sys.members.size() << '\n';
  for (const auto& m : sys.members) save_system(m, out);
  out << "components " << sys.components.size() << '\n';
  for (const auto& c : sys.components) {
    out << "component " << (c.fallback ? 1 : 0) << '\n';
    write_feature_set(c.features, out);
    c.model->save(out);
  }
  out << "end system\n";
}

TrainedSystem load_system(std::istream& in) {
  TrainedSystem sys;
  const auto head = next_line(in, "system");
  const auto sp = head.find(' ');
  if (sp == std::string::npos || parse_u64(head.substr(0, sp), "version") != kSystemVersion) {
    throw ParseError("system: unsupported header '" + head + "'", 0);
  }
  sys.name = head.substr(sp + 1);
  sys.lexelt = next_line(in, "lexelt");
  sys.config_digest = next_line(in, "config");
  sys.seed = parse_u64(next_line(in, "seed"), "seed");
  sys.combine = parse_combine(next_line(in, "combine"));
  const auto n_members = parse_u64(next_line(in, "members"), "member count");
  for (std::uint64_t i = 0; i < n_members; ++i) sys.members.push_back(load_system(in));
  const auto n_components = parse_u64(next_line(in, "components"), "component count");
  for (std::uint64_t i = 0; i < n_components; ++i) {
    TrainedComponent c;
    c.fallback = parse_u64(next_line(in, "component"), "fallback flag") != 0;
    c.features = read_feature_set(in);
    c.model = load_classifier(in);
    if (c.model->num_features() != c.features.size()) {
      throw ParseError("system: model width does not match its feature set", 0);
    }
    if (!c.fallback) c.featurizer = std::make_shared<const Featurizer>(c.features);
    sys.components.push_back(std::move(c));
  }
  if (next_line(in, "end") != "system") throw ParseError("system: missing 'end system'", 0);
  return sys;
}

}  // namespace wsd
