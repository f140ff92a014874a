#include "wsd/cli.hpp"

#include <atomic>
#include <fstream>
#include <functional>
#include <mutex>
#include <optional>
#include <ostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "wsd/corpus.hpp"
#include "wsd/eval.hpp"
#include "wsd/rng.hpp"
#include "wsd/stoplist.hpp"
#include "wsd/systems.hpp"

namespace wsd {

namespace fs = std::filesystem;

namespace {

std::pair<std::string, std::string> split_override(const std::string& kv) {
  auto eq = kv.find('=');
  if (eq == std::string::npos || eq == 0) throw std::invalid_argument("override '" + kv + "' is not key=value");
  return {kv.substr(0, eq), kv.substr(eq + 1)};
}

// Lexelt names become file names.
std::string file_stem(const std::string& lexelt) {
  std::string out = lexelt;
  for (auto& c : out) {
    if (c == '/' || c == '\\' || c == ':' || static_cast<unsigned char>(c) < 0x20) c = '_';
  }
  if (out.empty() || out == "." || out == "..") out = "_" + out;
  return out;
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
  out.flush();
  if (!out) throw std::runtime_error("error writing " + path.string());
}

StopList resolve_stoplist(const ExperimentManifest& m, std::span<const LexeltDataset> data) {
  if (m.stoplist == "none") return {};
  if (m.stoplist == "induce") {
    if (m.stoplist_corpus.empty()) return build_stoplist(data, m.seed);
    std::vector<DataSource> sources;
    for (const auto& p : m.stoplist_corpus) sources.push_back({p, {}, {}});
    const auto corpus = load_data(m, sources);
    return build_stoplist(corpus, m.seed);
  }
  return read_stoplist(resolve(m, m.stoplist));
}

}  // namespace

RunOutcome run_experiment(const ExperimentManifest& m, std::ostream* log) {
  if (m.output.empty()) throw std::invalid_argument("no output directory given");
  RunOutcome outcome;
  outcome.output = m.output;
  outcome.digest = manifest_digest(m);

  const auto data = load_data(m, m.data);
  if (data.empty()) throw std::invalid_argument("the manifest's data holds no lexelt");
  const KeySet key = m.key.empty() ? key_from_datasets(data) : read_key_file(resolve(m, m.key));
  const StopList stoplist = resolve_stoplist(m, data);

  std::vector<SystemConfig> configs;
  for (const auto& name : m.systems) {
    auto cfg = build_system(name, m.language);
    for (const auto& [k, v] : m.overrides) apply_override(cfg, k, v);
    configs.push_back(std::move(cfg));
  }

  // One unit per (system, lexelt); results land in fixed slots so the
  // output does not depend on scheduling.
  const std::size_t n_units = configs.size() * data.size();
  std::vector<std::optional<AnswerSet>> results(n_units);
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::mutex err_mu;
  std::string first_error;

  auto worker = [&] {
    for (;;) {
      const auto u = next.fetch_add(1);
      if (u >= n_units || failed.load()) return;
      const auto& cfg = configs[u / data.size()];
      const auto& ds = data[u % data.size()];
      try {
        auto answers = run_system(cfg, ds, stoplist, m.seed);
        answers.metadata["manifest"] = outcome.digest;
        answers.metadata["stoplist"] = stoplist_id(stoplist);
        results[u] = std::move(answers);
      } catch (const std::exception& e) {
        std::lock_guard lock(err_mu);
        if (!failed.exchange(true)) first_error = fmt::format("system {}, lexelt {}: {}", cfg.name, ds.lexelt, e.what());
      }
    }
  };
  const auto n_workers = std::max<std::size_t>(1, std::min(m.jobs, n_units));
  if (n_workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t i = 0; i < n_workers; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failed) throw std::runtime_error(first_error);

  fs::create_directories(m.output / "answers");
  std::vector<SystemAnswers> per_system;
  for (std::size_t s = 0; s < configs.size(); ++s) {
    const auto dir = m.output / "answers" / configs[s].name;
    fs::create_directories(dir);
    std::vector<AnswerSet> sets;
    for (std::size_t l = 0; l < data.size(); ++l) {
      auto& a = *results[s * data.size() + l];
      write_answers_file(a, dir / (file_stem(a.lexelt) + ".ans"));
      if (a.metadata["fallback"] != "none") {
        outcome.fallbacks.push_back(fmt::format("{} {}", a.metadata["fallback"], a.lexelt));
      }
      sets.push_back(std::move(a));
    }
    if (key.size() > 0) outcome.accuracy[configs[s].name] = score(sets, key);
    per_system.push_back(collect(configs[s].name, sets));
  }

  {
    std::ostringstream sl;
    sl << "# manifest " << outcome.digest << '\n' << "# id " << stoplist_id(stoplist) << '\n';
    write_stoplist(stoplist, sl);
    write_file(m.output / "stoplist.txt", sl.str());
  }

  std::size_t n_test = 0;
  for (const auto& ds : data) n_test += ds.test.size();

  std::ostringstream rep;
  rep << "# manifest " << outcome.digest << '\n';
  rep << "# seed " << m.seed << '\n';
  rep << "# rng " << kRngName << '\n';
  rep << "# stoplist " << stoplist_id(stoplist) << " (" << stoplist.words.size() << " words)\n";
  rep << fmt::format("language {}\nlexelts {}\ntest instances {}\n\n", to_string(m.language), data.size(), n_test);

  nlohmann::ordered_json summary;
  summary["manifest"] = outcome.digest;
  summary["seed"] = m.seed;
  summary["language"] = std::string(to_string(m.language));
  summary["lexelts"] = data.size();
  summary["test_instances"] = n_test;
  summary["stoplist"] = stoplist_id(stoplist);
  auto sys_json = nlohmann::ordered_json::array();

  if (key.size() > 0) {
    rep << fmt::format("{:<12} {:>15} {:>9}\n", "system", "correct/total", "accuracy");
    for (const auto& cfg : configs) {
      const auto& sc = outcome.accuracy.at(cfg.name);
      rep << fmt::format("{:<12} {:>15} {:>9.3f}\n", cfg.name, fmt::format("{}/{}", sc.correct, sc.total),
                         sc.accuracy());
      sys_json.push_back({{"system", cfg.name}, {"config", config_digest(cfg)}, {"correct", sc.correct},
                          {"total", sc.total}, {"accuracy", sc.accuracy()}});
    }
    rep << '\n';
    const auto agree = agreement(per_system, key);
    write_agreement_text(agree, rep);
    summary["agreement"] = nlohmann::ordered_json::parse(agreement_json(agree));
  } else {
    rep << "no answer key: accuracy not computed\n";
    for (const auto& cfg : configs) sys_json.push_back({{"system", cfg.name}, {"config", config_digest(cfg)}});
  }
  summary["systems"] = sys_json;

  rep << "\nfallbacks (component predicts the training prior):";
  if (outcome.fallbacks.empty()) rep << " none";
  rep << '\n';
  for (const auto& f : outcome.fallbacks) rep << "  " << f << '\n';
  summary["fallbacks"] = outcome.fallbacks;

  write_file(m.output / "report.txt", rep.str());
  write_file(m.output / "summary.json", summary.dump(2) + "\n");
  if (log) {
    *log << fmt::format("{} system(s) x {} lexelt(s) -> {}\n", configs.size(), data.size(), m.output.string());
  }
  return outcome;
}

namespace {

struct ConvertArgs {
  std::string input, output, test, key, split = "train", lang = "en";
  bool no_lowercase = false, keep_punct = false, drop_numbers = false;
};

int cmd_convert(const ConvertArgs& a, std::ostream& out, std::ostream& err) {
  TokenizerConfig tok;
  tok.language = std::string(to_string(parse_language(a.lang)));
  tok.lowercase = !a.no_lowercase;
  tok.strip_punctuation = !a.keep_punct;
  tok.keep_numbers = !a.drop_numbers;
  Split split;
  if (a.split == "train") {
    split = Split::train;
  } else if (a.split == "test") {
    split = Split::test;
  } else {
    throw std::invalid_argument("--split must be train or test");
  }

  auto primary = read_senseval_xml_file(a.input, tok, a.test.empty() ? split : Split::train);
  std::size_t skipped = primary.skipped;
  std::vector<LexeltDataset> data = std::move(primary.lexelts);
  if (!a.test.empty()) {
    auto test = read_senseval_xml_file(a.test, tok, Split::test);
    skipped += test.skipped;
    for (auto& t : test.lexelts) {
      auto it = std::find_if(data.begin(), data.end(), [&](const auto& d) { return d.lexelt == t.lexelt; });
      if (it == data.end()) {
        data.push_back(std::move(t));
      } else {
        it->test = std::move(t.test);
      }
    }
  }
  for (const auto& ds : data) validate(ds);

  std::ostringstream buf;
  std::size_t records = 0;
  for (const auto& ds : data) {
    write_canonical(ds, buf);
    records += ds.train.size() + ds.test.size();
  }
  write_file(a.output, buf.str());
  if (!a.key.empty()) {
    std::ostringstream kb;
    write_key(key_from_datasets(data), kb);
    write_file(a.key, kb.str());
  }
  out << fmt::format("{} instance(s) in {} lexelt(s) written to {}\n", records, data.size(), a.output);
  if (skipped) err << fmt::format("skipped {} instance(s) without a usable head or answer\n", skipped);
  return 0;
}

struct StoplistArgs {
  std::vector<std::string> inputs;
  std::string output;
  std::uint64_t seed = 42;
  std::size_t sample_size = 5, min_count = 10;
};

int cmd_stoplist(const StoplistArgs& a, std::ostream& out) {
  std::vector<LexeltDataset> data;
  for (const auto& p : a.inputs) {
    auto part = read_canonical_all(fs::path(p));
    data.insert(data.end(), std::make_move_iterator(part.begin()), std::make_move_iterator(part.end()));
  }
  StopListParams params;
  params.sample_size = a.sample_size;
  params.min_count = a.min_count;
  const auto list = build_stoplist(data, a.seed, params);
  std::ostringstream buf;
  buf << "# id " << stoplist_id(list) << '\n' << "# seed " << a.seed << '\n' << "# sampled";
  for (const auto& l : list.provenance.sampled_lexelts) buf << ' ' << l;
  buf << '\n';
  write_stoplist(list, buf);
  if (a.output.empty() || a.output == "-") {
    out << buf.str();
  } else {
    write_file(a.output, buf.str());
    out << fmt::format("{} stop word(s) from {} lexelt(s) written to {}\n", list.words.size(),
                       list.provenance.sampled_lexelts.size(), a.output);
  }
  return 0;
}

struct RunArgs {
  std::string manifest, stoplist, out;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> jobs;
  std::vector<std::string> overrides;
};

int cmd_run(const RunArgs& a, std::ostream& out, std::ostream& err) {
  auto m = load_manifest(a.manifest);
  if (a.seed) m.seed = *a.seed;
  if (a.jobs) m.jobs = std::max<std::size_t>(1, *a.jobs);
  if (!a.stoplist.empty()) m.stoplist = a.stoplist == "none" || a.stoplist == "induce" ? a.stoplist : fs::absolute(a.stoplist).string();
  for (const auto& kv : a.overrides) m.overrides.push_back(split_override(kv));
  if (!a.out.empty()) {
    m.output = a.out;
  } else if (m.output.empty()) {
    throw std::invalid_argument("no output directory: set \"output\" in the manifest or pass --out");
  } else {
    m.output = resolve(m, m.output);
  }
  const auto r = run_experiment(m, &err);
  for (const auto& [sys, sc] : r.accuracy) out << fmt::format("{:<12} {:.3f}\n", sys, sc.accuracy());
  out << "manifest " << r.digest << '\n';
  return 0;
}

struct ScoreArgs {
  std::string answers, key;
  bool json = false;
};

int cmd_score(const ScoreArgs& a, std::ostream& out) {
  const auto key = read_key_file(a.key);
  const auto systems = read_answer_tree(a.answers);
  if (systems.empty()) throw std::runtime_error("no .ans files under " + a.answers);
  nlohmann::ordered_json j = nlohmann::ordered_json::array();
  for (const auto& s : systems) {
    Score sc;
    std::vector<InstanceKey> missing;
    for (const auto& [ik, sense] : s.predictions) {
      const auto* senses = key.find(ik.first, ik.second);
      if (!senses) {
        missing.push_back(ik);
        continue;
      }
      ++sc.total;
      if (senses->count(sense)) ++sc.correct;
    }
    if (!missing.empty()) throw MissingKeyError(std::move(missing));
    if (a.json) {
      j.push_back({{"system", s.system}, {"correct", sc.correct}, {"total", sc.total}, {"accuracy", sc.accuracy()}});
    } else {
      out << fmt::format("{:<12} {:>6}/{:<6} {:.3f}\n", s.system, sc.correct, sc.total, sc.accuracy());
    }
  }
  if (systems.size() > 1) {
    const auto r = agreement(systems, key);
    if (a.json) {
      out << nlohmann::ordered_json{{"systems", j}, {"agreement", nlohmann::ordered_json::parse(agreement_json(r))}}.dump()
          << '\n';
    } else {
      out << fmt::format("optimal combination: {:.3f} ({}%)\n", r.optimal_accuracy(),
                         std::lround(100.0 * r.optimal_accuracy()));
    }
  } else if (a.json) {
    out << nlohmann::ordered_json{{"systems", j}}.dump() << '\n';
  }
  return 0;
}

struct AgreeArgs {
  std::vector<std::string> paths;  // answer dirs, then the key
  bool json = false;
};

int cmd_agree(const AgreeArgs& a, std::ostream& out) {
  if (a.paths.size() < 2) throw std::invalid_argument("agree needs at least one answer directory and a key");
  const auto key = read_key_file(a.paths.back());
  std::vector<SystemAnswers> systems;
  for (std::size_t i = 0; i + 1 < a.paths.size(); ++i) {
    for (auto& s : read_answer_tree(a.paths[i])) systems.push_back(std::move(s));
  }
  if (systems.empty()) throw std::runtime_error("no .ans files found");
  const auto r = agreement(systems, key);
  if (a.json) {
    out << agreement_json(r) << '\n';
  } else {
    write_agreement_text(r, out);
  }
  return 0;
}

struct TrainArgs {
  std::string data, system, lexelt, lang = "en", stoplist, output;
  std::uint64_t seed = 42;
  std::vector<std::string> overrides;
};

const LexeltDataset& pick_lexelt(const std::vector<LexeltDataset>& data, const std::string& lexelt) {
  if (lexelt.empty()) {
    if (data.size() != 1) throw std::invalid_argument("the data holds several lexelts; pass --lexelt");
    return data.front();
  }
  for (const auto& d : data) {
    if (d.lexelt == lexelt) return d;
  }
  throw std::invalid_argument("lexelt '" + lexelt + "' not found");
}

int cmd_train(const TrainArgs& a, std::ostream& out) {
  const auto data = read_canonical_all(fs::path(a.data));
  const auto& ds = pick_lexelt(data, a.lexelt);
  auto cfg = build_system(a.system, parse_language(a.lang));
  for (const auto& kv : a.overrides) {
    auto [k, v] = split_override(kv);
    apply_override(cfg, k, v);
  }
  const StopList sl = a.stoplist.empty() ? StopList{} : read_stoplist(fs::path(a.stoplist));
  const auto sys = train_system(cfg, ds.lexelt, ds.train, sl, a.seed);
  std::ostringstream buf;
  save_system(sys, buf);
  write_file(a.output, buf.str());
  out << fmt::format("{} trained on {} instance(s) of {}\n", sys.name, ds.train.size(), ds.lexelt);
  return 0;
}

struct ApplyArgs {
  std::string model, data, output;
};

int cmd_apply(const ApplyArgs& a, std::ostream& out) {
  std::ifstream in(a.model);
  if (!in) throw std::runtime_error("cannot open " + a.model);
  const auto sys = load_system(in);
  const auto data = read_canonical_all(fs::path(a.data));
  const auto& ds = pick_lexelt(data, sys.lexelt);
  const auto answers = apply_system(sys, ds.test);
  std::ostringstream buf;
  write_answers(answers, buf);
  if (a.output.empty() || a.output == "-") {
    out << buf.str();
  } else {
    write_file(a.output, buf.str());
  }
  return 0;
}

int cmd_systems(const std::string& lang, std::ostream& out) {
  const auto l = parse_language(lang);
  for (const auto& name : system_names(l)) {
    const auto cfg = build_system(name, l);
    out << describe(cfg) << "digest " << config_digest(cfg) << "\n\n";
  }
  return 0;
}

}  // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Supervised word sense disambiguation: the eight Duluth lexical-sample systems"};
  app.require_subcommand(1);
  std::function<int()> action;

  ConvertArgs conv;
  auto* c = app.add_subcommand("convert", "Convert lexical-sample markup to the canonical JSON-lines format");
  c->add_option("input", conv.input, "Markup file")->required();
  c->add_option("output", conv.output, "Canonical output file")->required();
  c->add_option("--split", conv.split, "Split of the input's instances (train|test)")->capture_default_str();
  c->add_option("--test", conv.test, "Markup file holding the test split of the same lexelts");
  c->add_option("--key", conv.key, "Also write a key file of the converted gold senses");
  c->add_option("--lang", conv.lang, "Language (en|es)")->capture_default_str();
  c->add_flag("--no-lowercase", conv.no_lowercase, "Keep letter case");
  c->add_flag("--keep-punctuation", conv.keep_punct, "Keep punctuation attached to tokens");
  c->add_flag("--drop-numbers", conv.drop_numbers, "Drop numeric tokens");
  c->callback([&] { action = [&] { return cmd_convert(conv, out, err); }; });

  StoplistArgs sla;
  auto* s = app.add_subcommand("stoplist", "Induce a stop-list from training data");
  s->add_option("inputs", sla.inputs, "Canonical data files")->required();
  s->add_option("-o,--output", sla.output, "Output file (default: stdout)");
  s->add_option("--seed", sla.seed, "Sampling seed")->capture_default_str();
  s->add_option("--sample-size", sla.sample_size, "Lexelts sampled")->capture_default_str();
  s->add_option("--min-count", sla.min_count, "Minimum aggregate count")->capture_default_str();
  s->callback([&] { action = [&] { return cmd_stoplist(sla, out); }; });

  RunArgs ra;
  auto* r = app.add_subcommand("run", "Run an experiment manifest");
  r->add_option("manifest", ra.manifest, "Manifest JSON file")->required();
  r->add_option("--seed", ra.seed, "Seed (overrides the manifest; default 42)");
  r->add_option("--jobs", ra.jobs, "Worker threads");
  r->add_option("--stoplist", ra.stoplist, "Stop-list file, 'induce' or 'none'");
  r->add_option("--config-override", ra.overrides, "key=value parameter override (repeatable)");
  r->add_option("--out", ra.out, "Output directory");
  r->callback([&] { action = [&] { return cmd_run(ra, out, err); }; });

  ScoreArgs sa;
  auto* sc = app.add_subcommand("score", "Fine-grained accuracy of answer files");
  sc->add_option("answers", sa.answers, "Answer directory")->required();
  sc->add_option("key", sa.key, "Key file")->required();
  sc->add_flag("--json", sa.json, "Machine-readable output");
  sc->callback([&] { action = [&] { return cmd_score(sa, out); }; });

  AgreeArgs aa;
  auto* ag = app.add_subcommand("agree", "Agreement and optimal-combination analysis");
  ag->add_option("paths", aa.paths, "Answer directories followed by the key file")->required()->expected(2, -1);
  ag->add_flag("--json", aa.json, "Machine-readable output");
  ag->callback([&] { action = [&] { return cmd_agree(aa, out); }; });

  TrainArgs ta;
  auto* t = app.add_subcommand("train", "Train one system on one lexelt and save it");
  t->add_option("data", ta.data, "Canonical data file")->required();
  t->add_option("--system", ta.system, "System name")->required();
  t->add_option("--lexelt", ta.lexelt, "Lexelt (needed when the file holds several)");
  t->add_option("--lang", ta.lang, "Language (en|es)")->capture_default_str();
  t->add_option("--stoplist", ta.stoplist, "Stop-list file");
  t->add_option("--seed", ta.seed, "Seed")->capture_default_str();
  t->add_option("--config-override", ta.overrides, "key=value parameter override (repeatable)");
  t->add_option("-o,--output", ta.output, "Model file")->required();
  t->callback([&] { action = [&] { return cmd_train(ta, out); }; });

  ApplyArgs pa;
  auto* p = app.add_subcommand("apply", "Tag the test split with a saved system");
  p->add_option("model", pa.model, "Model file")->required();
  p->add_option("data", pa.data, "Canonical data file")->required();
  p->add_option("-o,--output", pa.output, "Answer file (default: stdout)");
  p->callback([&] { action = [&] { return cmd_apply(pa, out); }; });

  std::string lang = "en";
  auto* sy = app.add_subcommand("systems", "Print the system registry");
  sy->add_option("--lang", lang, "Language (en|es)")->capture_default_str();
  sy->callback([&] { action = [&] { return cmd_systems(lang, out); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }
  try {
    return action ? action() : 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace wsd
