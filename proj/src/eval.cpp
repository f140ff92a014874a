#include "wsd/eval.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

namespace wsd {

void KeySet::add(const std::string& lexelt, const std::string& id, const std::vector<std::string>& senses) {
  if (senses.empty()) throw ValidationError("key for " + lexelt + " " + id + " has no sense");
  auto& set = entries_[{lexelt, id}];
  set.insert(senses.begin(), senses.end());
}

const std::set<std::string>* KeySet::find(const std::string& lexelt, const std::string& id) const {
  auto it = entries_.find({lexelt, id});
  return it == entries_.end() ? nullptr : &it->second;
}

KeySet key_from_datasets(std::span<const LexeltDataset> datasets) {
  KeySet key;
  for (const auto& ds : datasets) {
    for (const auto& inst : ds.test) {
      if (!inst.gold_senses.empty()) key.add(ds.lexelt, inst.id, inst.gold_senses);
    }
  }
  return key;
}

namespace {

std::vector<std::string> split_ws(const std::string& line) {
  std::istringstream ss(line);
  std::vector<std::string> out;
  for (std::string w; ss >> w;) out.push_back(std::move(w));
  return out;
}

bool skippable(const std::string& line) {
  auto p = line.find_first_not_of(" \t\r");
  return p == std::string::npos || line[p] == '#';
}

}  // namespace

KeySet read_key(std::istream& in) {
  KeySet key;
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (skippable(line)) continue;
    auto words = split_ws(line);
    if (words.size() < 3) throw ParseError("key line needs lexelt, id and at least one sense", n);
    key.add(words[0], words[1], {words.begin() + 2, words.end()});
  }
  return key;
}

KeySet read_key_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return read_key(in);
}

void write_key(const KeySet& key, std::ostream& out) {
  for (const auto& [k, senses] : key.entries()) {
    out << k.first << ' ' << k.second;
    for (const auto& s : senses) out << ' ' << s;
    out << '\n';
  }
}

namespace {

std::string missing_message(const std::vector<InstanceKey>& missing) {
  std::string msg = fmt::format("{} answered instance(s) missing from the key:", missing.size());
  const std::size_t shown = std::min<std::size_t>(missing.size(), 20);
  for (std::size_t i = 0; i < shown; ++i) msg += fmt::format(" {}/{}", missing[i].first, missing[i].second);
  if (shown < missing.size()) msg += " ...";
  return msg;
}

}  // namespace

MissingKeyError::MissingKeyError(std::vector<InstanceKey> missing)
    : std::runtime_error(missing_message(missing)), missing_(std::move(missing)) {}

Score score(const AnswerSet& answers, const KeySet& key) { return score(std::span(&answers, 1), key); }

Score score(std::span<const AnswerSet> answers, const KeySet& key) {
  Score s;
  std::vector<InstanceKey> missing;
  for (const auto& a : answers) {
    for (const auto& [id, ans] : a.entries) {
      const auto* senses = key.find(a.lexelt, id);
      if (!senses) {
        missing.emplace_back(a.lexelt, id);
        continue;
      }
      ++s.total;
      if (senses->count(ans.sense)) ++s.correct;
    }
  }
  if (!missing.empty()) throw MissingKeyError(std::move(missing));
  return s;
}

SystemAnswers collect(std::string system, std::span<const AnswerSet> sets) {
  SystemAnswers out;
  out.system = std::move(system);
  for (const auto& a : sets) {
    for (const auto& [id, ans] : a.entries) {
      if (!out.predictions.emplace(InstanceKey{a.lexelt, id}, ans.sense).second) {
        throw ValidationError(fmt::format("{}: instance {}/{} answered twice", out.system, a.lexelt, id));
      }
    }
  }
  return out;
}

double AgreementReport::share(std::size_t count, std::size_t total) {
  return total == 0 ? 0.0 : static_cast<double>(count) / static_cast<double>(total);
}

double AgreementReport::optimal_accuracy() const {
  return total == 0 ? 0.0 : 1.0 - share(none_correct(), total);
}

WholePercentShares AgreementReport::whole_percent_shares() const {
  WholePercentShares s;
  s.all = static_cast<int>(std::lround(100.0 * share(all_correct(), total)));
  s.none = static_cast<int>(std::lround(100.0 * share(none_correct(), total)));
  s.partial = 100 - s.all - s.none;
  return s;
}

AgreementReport AgreementReport::from_counts(std::vector<std::string> systems, std::vector<std::size_t> by_correct) {
  if (by_correct.size() != systems.size() + 1) {
    throw std::invalid_argument("need one partition count per possible number of correct systems");
  }
  AgreementReport r;
  r.systems = std::move(systems);
  r.by_correct = std::move(by_correct);
  for (auto c : r.by_correct) r.total += c;
  r.per_system.resize(r.systems.size());
  return r;
}

AgreementReport agreement(std::span<const SystemAnswers> systems, const KeySet& key) {
  if (systems.empty()) throw std::invalid_argument("agreement needs at least one system");
  const auto& first = systems.front().predictions;
  for (const auto& s : systems.subspan(1)) {
    bool same = s.predictions.size() == first.size();
    for (auto a = first.begin(), b = s.predictions.begin(); same && a != first.end(); ++a, ++b) same = a->first == b->first;
    if (!same) {
      throw std::invalid_argument(fmt::format("systems {} and {} answer different instances", systems.front().system,
                                              s.system));
    }
  }

  AgreementReport r;
  r.by_correct.assign(systems.size() + 1, 0);
  r.per_system.resize(systems.size());
  std::vector<InstanceKey> missing;
  for (const auto& [ik, _] : first) {
    const auto* senses = key.find(ik.first, ik.second);
    if (!senses) {
      missing.push_back(ik);
      continue;
    }
    std::size_t k = 0;
    for (std::size_t i = 0; i < systems.size(); ++i) {
      const bool ok = senses->count(systems[i].predictions.at(ik)) > 0;
      ++r.per_system[i].total;
      if (ok) {
        ++r.per_system[i].correct;
        ++k;
      }
    }
    ++r.by_correct[k];
    ++r.total;
  }
  if (!missing.empty()) throw MissingKeyError(std::move(missing));
  for (const auto& s : systems) r.systems.push_back(s.system);

  std::size_t sum = 0;
  for (auto c : r.by_correct) sum += c;
  if (sum != r.total) throw std::logic_error("agreement partitions do not sum to the total");
  return r;
}

void write_agreement_text(const AgreementReport& r, std::ostream& out) {
  out << fmt::format("systems: {}\n", r.systems.size());
  for (std::size_t i = 0; i < r.systems.size(); ++i) {
    const auto& s = i < r.per_system.size() ? r.per_system[i] : Score{};
    out << fmt::format("  {:<12} {:>6}/{:<6} {:.3f}\n", r.systems[i], s.correct, s.total, s.accuracy());
  }
  out << fmt::format("instances: {}\n", r.total);
  out << "correct-by  instances  share\n";
  for (std::size_t k = r.by_correct.size(); k-- > 0;) {
    out << fmt::format("  {:>8}  {:>9}  {:5.1f}%\n", k, r.by_correct[k], 100.0 * AgreementReport::share(r.by_correct[k], r.total));
  }
  const auto w = r.whole_percent_shares();
  out << fmt::format("all correct:  {} ({}%)\n", r.all_correct(), w.all);
  out << fmt::format("some correct: {} ({}%)\n", r.partial(), w.partial);
  out << fmt::format("none correct: {} ({}%)\n", r.none_correct(), w.none);
  out << fmt::format("optimal combination accuracy: {:.3f} ({}%)\n", r.optimal_accuracy(),
                     std::lround(100.0 * r.optimal_accuracy()));
}

std::string agreement_json(const AgreementReport& r) {
  nlohmann::ordered_json j;
  j["systems"] = r.systems;
  auto acc = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < r.systems.size(); ++i) {
    const auto& s = i < r.per_system.size() ? r.per_system[i] : Score{};
    acc.push_back({{"system", r.systems[i]}, {"correct", s.correct}, {"total", s.total}, {"accuracy", s.accuracy()}});
  }
  j["per_system"] = acc;
  j["total"] = r.total;
  j["by_correct"] = r.by_correct;
  j["all_correct"] = r.all_correct();
  j["partial"] = r.partial();
  j["none_correct"] = r.none_correct();
  j["optimal_accuracy"] = r.optimal_accuracy();
  const auto w = r.whole_percent_shares();
  j["whole_percent"] = {{"all", w.all}, {"partial", w.partial}, {"none", w.none}};
  return j.dump();
}

void write_answers(const AnswerSet& a, std::ostream& out) {
  for (const auto& [k, v] : a.metadata) out << "# " << k << ' ' << v << '\n';
  for (const auto& [id, ans] : a.entries) {
    if (ans.sense.empty() || ans.sense.find_first_of(" \t\r\n") != std::string::npos) {
      throw std::invalid_argument("sense '" + ans.sense + "' cannot be written to an answer file");
    }
    out << a.lexelt << ' ' << id << ' ' << ans.sense << '\n';
  }
}

void write_answers_file(const AnswerSet& a, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  write_answers(a, out);
  out.flush();
  if (!out) throw std::runtime_error("error writing " + path.string());
}

std::vector<AnswerSet> read_answers(std::istream& in, const std::string& system) {
  std::map<std::string, AnswerSet> by_lexelt;
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (skippable(line)) continue;
    auto words = split_ws(line);
    if (words.size() != 3) throw ParseError("answer line must be 'lexelt instance_id sense'", n);
    auto& set = by_lexelt[words[0]];
    set.lexelt = words[0];
    set.system = system;
    SenseDistribution d;
    d.add(words[2], 1.0);
    if (!set.entries.emplace(words[1], Answer{words[2], std::move(d)}).second) {
      throw ParseError("instance " + words[1] + " answered twice", n);
    }
  }
  std::vector<AnswerSet> out;
  for (auto& [_, s] : by_lexelt) out.push_back(std::move(s));
  return out;
}

std::vector<AnswerSet> read_answers_file(const std::filesystem::path& path, const std::string& system) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  try {
    return read_answers(in, system);
  } catch (const ParseError& e) {
    throw std::runtime_error(path.string() + ": " + e.what());
  }
}

std::vector<SystemAnswers> read_answer_tree(const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir)) throw std::runtime_error(dir.string() + " is not a directory");
  std::map<std::string, std::vector<fs::path>> files;  // system -> files
  const auto own = dir.filename().empty() ? dir.parent_path().filename().string() : dir.filename().string();
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (!e.is_regular_file() || e.path().extension() != ".ans") continue;
    const auto rel = fs::relative(e.path(), dir);
    const auto sys = std::distance(rel.begin(), rel.end()) > 1 ? rel.begin()->string() : own;
    files[sys].push_back(e.path());
  }
  std::vector<SystemAnswers> out;
  for (auto& [sys, paths] : files) {
    std::sort(paths.begin(), paths.end());
    std::vector<AnswerSet> sets;
    for (const auto& p : paths) {
      auto part = read_answers_file(p, sys);
      sets.insert(sets.end(), std::make_move_iterator(part.begin()), std::make_move_iterator(part.end()));
    }
    out.push_back(collect(sys, sets));
  }
  return out;
}

}  // namespace wsd
