#include "wsd/manifest.hpp"

#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include <openssl/evp.h>

#include <json.hpp>

namespace wsd {

namespace {

using json = nlohmann::json;

std::string scalar_text(const json& v, const std::string& key) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number_integer() || v.is_number_unsigned()) return v.dump();
  if (v.is_number_float()) return v.dump();
  throw std::invalid_argument("manifest: override '" + key + "' must be a string, number or boolean");
}

std::vector<std::filesystem::path> path_list(const json& v, const char* key) {
  std::vector<std::filesystem::path> out;
  if (!v.is_array()) throw std::invalid_argument(std::string("manifest: '") + key + "' must be an array of paths");
  for (const auto& e : v) {
    if (!e.is_string()) throw std::invalid_argument(std::string("manifest: '") + key + "' entries must be strings");
    out.emplace_back(e.get<std::string>());
  }
  return out;
}

}  // namespace

ExperimentManifest parse_manifest(const std::string& json_text, const std::filesystem::path& base_dir) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("manifest: ") + e.what());
  }
  if (!j.is_object()) throw std::invalid_argument("manifest: top level must be an object");

  ExperimentManifest m;
  m.base_dir = base_dir;
  try {
    for (const auto& [key, v] : j.items()) {
      if (key == "language") {
        m.language = parse_language(v.get<std::string>());
      } else if (key == "systems") {
        m.systems = v.get<std::vector<std::string>>();
      } else if (key == "data") {
        if (!v.is_array()) throw std::invalid_argument("manifest: 'data' must be an array");
        for (const auto& e : v) {
          DataSource src;
          if (e.is_string()) {
            src.canonical = e.get<std::string>();
          } else if (e.is_object() && e.contains("train") && e.contains("test") && e.size() == 2) {
            src.train_xml = e.at("train").get<std::string>();
            src.test_xml = e.at("test").get<std::string>();
          } else {
            throw std::invalid_argument("manifest: data entries are paths or {\"train\": ..., \"test\": ...}");
          }
          m.data.push_back(std::move(src));
        }
      } else if (key == "key") {
        m.key = v.get<std::string>();
      } else if (key == "seed") {
        m.seed = v.get<std::uint64_t>();
      } else if (key == "stoplist") {
        m.stoplist = v.get<std::string>();
      } else if (key == "stoplist_corpus") {
        m.stoplist_corpus = path_list(v, "stoplist_corpus");
      } else if (key == "overrides") {
        if (!v.is_object()) throw std::invalid_argument("manifest: 'overrides' must be an object");
        for (const auto& [ok, ov] : v.items()) m.overrides.emplace_back(ok, scalar_text(ov, ok));
      } else if (key == "output") {
        m.output = v.get<std::string>();
      } else if (key == "jobs") {
        m.jobs = v.get<std::size_t>();
      } else {
        throw std::invalid_argument("manifest: unknown key '" + key + "'");
      }
    }
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("manifest: ") + e.what());
  }
  if (m.data.empty()) throw std::invalid_argument("manifest: 'data' lists no input");
  if (m.systems.empty()) m.systems = system_names(m.language);
  for (auto& s : m.systems) s = build_system(s, m.language).name;
  if (m.jobs == 0) m.jobs = 1;
  return m;
}

ExperimentManifest load_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open manifest " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  auto dir = path.parent_path();
  return parse_manifest(buf.str(), dir.empty() ? std::filesystem::path(".") : dir);
}

std::filesystem::path resolve(const ExperimentManifest& m, const std::filesystem::path& p) {
  return p.is_absolute() ? p : m.base_dir / p;
}

std::string sha256_hex(std::string_view data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("SHA-256 failed");
  }
  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[md[i] >> 4];
    out += hex[md[i] & 15];
  }
  return out;
}

std::string sha256_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return sha256_hex(buf.str());
}

std::string manifest_digest(const ExperimentManifest& m) {
  nlohmann::ordered_json j;
  j["language"] = std::string(to_string(m.language));
  j["systems"] = m.systems;
  auto data = nlohmann::ordered_json::array();
  for (const auto& d : m.data) {
    if (!d.canonical.empty()) {
      data.push_back({{"canonical", sha256_file(resolve(m, d.canonical))}});
    } else {
      data.push_back({{"train", sha256_file(resolve(m, d.train_xml))}, {"test", sha256_file(resolve(m, d.test_xml))}});
    }
  }
  j["data"] = data;
  j["key"] = m.key.empty() ? std::string("-") : sha256_file(resolve(m, m.key));
  j["seed"] = m.seed;
  j["stoplist"] =
      (m.stoplist == "induce" || m.stoplist == "none") ? m.stoplist : sha256_file(resolve(m, m.stoplist));
  auto corpus = nlohmann::ordered_json::array();
  for (const auto& p : m.stoplist_corpus) corpus.push_back(sha256_file(resolve(m, p)));
  j["stoplist_corpus"] = corpus;
  auto ov = nlohmann::ordered_json::array();
  for (const auto& [k, v] : m.overrides) ov.push_back({k, v});
  j["overrides"] = ov;
  return sha256_hex(j.dump());
}

std::vector<LexeltDataset> load_data(const ExperimentManifest& m, std::span<const DataSource> sources) {
  std::vector<LexeltDataset> out;
  std::map<std::string, std::size_t> index;
  auto merge = [&](LexeltDataset&& ds) {
    auto [it, fresh] = index.emplace(ds.lexelt, out.size());
    if (fresh) {
      out.push_back(std::move(ds));
      return;
    }
    auto& dst = out[it->second];
    dst.train.insert(dst.train.end(), std::make_move_iterator(ds.train.begin()), std::make_move_iterator(ds.train.end()));
    dst.test.insert(dst.test.end(), std::make_move_iterator(ds.test.begin()), std::make_move_iterator(ds.test.end()));
  };
  TokenizerConfig tok;
  tok.language = std::string(to_string(m.language));
  for (const auto& src : sources) {
    if (!src.canonical.empty()) {
      for (auto& ds : read_canonical_all(resolve(m, src.canonical))) merge(std::move(ds));
    } else {
      for (auto& ds : read_senseval_xml_file(resolve(m, src.train_xml), tok, Split::train).lexelts) merge(std::move(ds));
      for (auto& ds : read_senseval_xml_file(resolve(m, src.test_xml), tok, Split::test).lexelts) merge(std::move(ds));
    }
  }
  for (const auto& ds : out) validate(ds);
  return out;
}

}  // namespace wsd
