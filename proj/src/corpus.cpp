#include "wsd/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <unordered_set>

#include <json.hpp>

#include "utf8.hpp"

namespace wsd {

std::string_view to_string(Split s) { return s == Split::train ? "train" : "test"; }

namespace {

char32_t lower_codepoint(char32_t c) {
  if (c < 0x80) return (c >= 'A' && c <= 'Z') ? c + 0x20 : c;
  // Latin-1 supplement, minus the multiplication sign.
  if (c >= 0xC0 && c <= 0xDE && c != 0xD7) return c + 0x20;
  // Latin Extended-A: upper/lower alternate, with two offsets in parity.
  if (c >= 0x100 && c <= 0x137) return c | 1;
  if (c >= 0x139 && c <= 0x148) return (c & 1) ? c + 1 : c;
  if (c >= 0x14A && c <= 0x177) return c | 1;
  if (c == 0x178) return 0xFF;
  if (c >= 0x179 && c <= 0x17E) return (c & 1) ? c + 1 : c;
  // Greek and Cyrillic capitals.
  if (c >= 0x391 && c <= 0x3AB && c != 0x3A2) return c + 0x20;
  if (c >= 0x410 && c <= 0x42F) return c + 0x20;
  if (c >= 0x400 && c <= 0x40F) return c + 0x50;
  return c;
}

bool is_punct(char32_t c) {
  if (c < 0x80) {
    return (c >= 0x21 && c <= 0x2F) || (c >= 0x3A && c <= 0x40) || (c >= 0x5B && c <= 0x60) ||
           (c >= 0x7B && c <= 0x7E);
  }
  switch (c) {
    case 0xA1: case 0xA7: case 0xAB: case 0xB6: case 0xB7: case 0xBB: case 0xBF:
      return true;
    default:
      break;
  }
  return (c >= 0x2010 && c <= 0x2027) || (c >= 0x2030 && c <= 0x205E) ||
         (c >= 0x3000 && c <= 0x3003);
}

bool is_space(char32_t c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f' || c == 0xA0;
}

bool is_number(const std::u32string& t) {
  bool digit = false;
  for (char32_t c : t) {
    if (c >= '0' && c <= '9') {
      digit = true;
    } else if (c != '.' && c != ',') {
      return false;
    }
  }
  return digit;
}

}  // namespace

std::string fold_case(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  utf8::for_each(text, [&](char32_t c, std::string_view raw, bool valid) {
    if (valid) {
      utf8::append(out, lower_codepoint(c));
    } else {
      out.append(raw);
    }
  });
  return out;
}

std::vector<Token> tokenize(std::string_view text, const TokenizerConfig& config) {
  std::vector<Token> tokens;
  std::u32string current;
  std::string invalid_bytes;

  auto flush = [&] {
    if (current.empty()) return;
    std::size_t begin = 0;
    std::size_t end = current.size();
    if (config.strip_punctuation) {
      while (begin < end && is_punct(current[begin])) ++begin;
      while (end > begin && is_punct(current[end - 1])) --end;
    }
    std::u32string word = current.substr(begin, end - begin);
    current.clear();
    if (word.empty()) return;
    if (!config.keep_numbers && is_number(word)) return;
    std::string surface;
    for (char32_t c : word) {
      utf8::append(surface, config.lowercase ? lower_codepoint(c) : c);
    }
    tokens.push_back(std::move(surface));
  };

  utf8::for_each(text, [&](char32_t c, std::string_view, bool valid) {
    if (!valid) c = 0xFFFD;
    if (is_space(c)) {
      flush();
    } else {
      current.push_back(c);
    }
  });
  flush();
  return tokens;
}

void validate(const LexeltDataset& ds) {
  std::unordered_set<std::string> ids;
  auto check = [&](const Instance& inst, bool training) {
    if (inst.lexelt != ds.lexelt) {
      throw ValidationError("instance " + inst.id + " belongs to lexelt '" + inst.lexelt +
                            "', expected '" + ds.lexelt + "'");
    }
    if (inst.id.empty()) throw ValidationError("instance with empty id in " + ds.lexelt);
    if (inst.target_index >= inst.tokens.size()) {
      throw ValidationError("instance " + inst.id + ": target_index " +
                            std::to_string(inst.target_index) + " out of range for " +
                            std::to_string(inst.tokens.size()) + " tokens");
    }
    for (const auto& t : inst.tokens) {
      if (t.empty()) throw ValidationError("instance " + inst.id + ": empty token");
      if (std::any_of(t.begin(), t.end(), [](char ch) {
            return ch == ' ' || ch == '\t' || ch == '\n' || ch == '\r';
          })) {
        throw ValidationError("instance " + inst.id + ": token contains whitespace");
      }
    }
    if (training && inst.gold_senses.empty()) {
      throw ValidationError("training instance " + inst.id + " has no sense");
    }
    if (!ids.insert(inst.id).second) {
      throw ValidationError("duplicate instance id " + inst.id + " in " + ds.lexelt);
    }
  };
  for (const auto& inst : ds.train) check(inst, true);
  for (const auto& inst : ds.test) check(inst, false);
}

namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json to_record(const Instance& inst, Split split) {
  ordered_json j;
  j["lexelt"] = inst.lexelt;
  j["id"] = inst.id;
  j["split"] = std::string(to_string(split));
  j["senses"] = inst.gold_senses;
  j["tokens"] = inst.tokens;
  j["target_index"] = inst.target_index;
  return j;
}

template <class T>
T field(const nlohmann::json& j, const char* key, std::size_t line) {
  auto it = j.find(key);
  if (it == j.end()) throw ParseError(std::string("missing field '") + key + "'", line);
  try {
    return it->get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ParseError(std::string("field '") + key + "' has the wrong type", line);
  }
}

}  // namespace

std::vector<LexeltDataset> read_canonical_all(std::istream& in) {
  std::vector<LexeltDataset> out;
  std::map<std::string, std::size_t> slot;
  std::map<std::string, std::set<std::string>> seen_ids;
  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (!text.empty() && text.back() == '\r') text.pop_back();
    if (text.find_first_not_of(" \t") == std::string::npos) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
      throw ParseError(std::string("malformed record: ") + e.what(), line);
    }
    if (!j.is_object()) throw ParseError("record is not an object", line);

    Instance inst;
    inst.lexelt = field<std::string>(j, "lexelt", line);
    inst.id = field<std::string>(j, "id", line);
    auto split = field<std::string>(j, "split", line);
    inst.gold_senses = field<std::vector<std::string>>(j, "senses", line);
    inst.tokens = field<std::vector<std::string>>(j, "tokens", line);
    auto target = field<long long>(j, "target_index", line);
    if (split != "train" && split != "test") {
      throw ParseError("split must be \"train\" or \"test\", got \"" + split + "\"", line);
    }
    if (target < 0 || static_cast<std::size_t>(target) >= inst.tokens.size()) {
      throw ParseError("target_index " + std::to_string(target) + " out of range for " +
                           std::to_string(inst.tokens.size()) + " tokens",
                       line);
    }
    inst.target_index = static_cast<std::size_t>(target);
    for (const auto& t : inst.tokens) {
      if (t.empty() || t.find_first_of(" \t\r\n") != std::string::npos) {
        throw ParseError("token is empty or contains whitespace", line);
      }
    }
    if (split == "train" && inst.gold_senses.empty()) {
      throw ParseError("training record without senses", line);
    }
    if (!seen_ids[inst.lexelt].insert(inst.id).second) {
      throw ValidationError("line " + std::to_string(line) + ": duplicate instance id " + inst.id +
                            " in " + inst.lexelt);
    }

    auto [it, fresh] = slot.try_emplace(inst.lexelt, out.size());
    if (fresh) {
      out.emplace_back();
      out.back().lexelt = inst.lexelt;
    }
    auto& ds = out[it->second];
    (split == "train" ? ds.train : ds.test).push_back(std::move(inst));
  }
  return out;
}

std::vector<LexeltDataset> read_canonical_all(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return read_canonical_all(in);
}

LexeltDataset read_canonical(std::istream& in) {
  auto all = read_canonical_all(in);
  if (all.empty()) return {};
  if (all.size() > 1) {
    throw ValidationError("expected a single lexelt, found " + std::to_string(all.size()));
  }
  return std::move(all.front());
}

LexeltDataset read_canonical(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return read_canonical(in);
}

void write_canonical(const LexeltDataset& ds, std::ostream& out) {
  for (const auto& inst : ds.train) out << to_record(inst, Split::train).dump() << '\n';
  for (const auto& inst : ds.test) out << to_record(inst, Split::test).dump() << '\n';
}

void write_canonical(const LexeltDataset& ds, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  write_canonical(ds, out);
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

}  // namespace wsd
