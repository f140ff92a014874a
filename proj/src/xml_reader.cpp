// Tolerant reader for lexical-sample markup. The public distribution files
// are SGML-ish rather than well-formed XML (undeclared entities, stray
// tags inside contexts), so this scans tags directly instead of going
// through a validating parser.

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

#include "utf8.hpp"
#include "wsd/corpus.hpp"

namespace wsd {

namespace {

struct Tag {
  std::string name;  // lowercased, without the leading '/'
  bool closing = false;
  bool self_closing = false;
  std::map<std::string, std::string> attrs;
};

std::string ascii_lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c + 32);
  }
  return out;
}

bool name_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == ':' || c == '.';
}

std::string decode_entities(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  std::size_t i = 0;
  while (i < text.size()) {
    if (text[i] != '&') {
      out.push_back(text[i++]);
      continue;
    }
    auto semi = text.find(';', i);
    if (semi == std::string_view::npos || semi - i > 12) {
      out.push_back(text[i++]);
      continue;
    }
    auto name = text.substr(i + 1, semi - i - 1);
    if (name == "amp") {
      out.push_back('&');
    } else if (name == "lt") {
      out.push_back('<');
    } else if (name == "gt") {
      out.push_back('>');
    } else if (name == "quot") {
      out.push_back('"');
    } else if (name == "apos") {
      out.push_back('\'');
    } else if (name.size() > 1 && name[0] == '#') {
      char32_t cp = 0;
      bool hex = name[1] == 'x' || name[1] == 'X';
      try {
        cp = static_cast<char32_t>(std::stoul(std::string(name.substr(hex ? 2 : 1)), nullptr, hex ? 16 : 10));
      } catch (const std::exception&) {
        cp = 0xFFFD;
      }
      utf8::append(out, cp);
    } else {
      // Undeclared entity; treat it as a token boundary.
      out.push_back(' ');
    }
    i = semi + 1;
  }
  return out;
}

class Scanner {
public:
  explicit Scanner(std::string_view doc) : doc_(doc) {}

  std::size_t line_at(std::size_t pos) const {
    return 1 + static_cast<std::size_t>(std::count(doc_.begin(), doc_.begin() + std::min(pos, doc_.size()), '\n'));
  }

  // Returns the text up to the next tag and advances past it; sets `tag`
  // when a tag follows.
  std::string_view next(std::optional<Tag>& tag) {
    tag.reset();
    auto lt = doc_.find('<', pos_);
    std::string_view text = doc_.substr(pos_, lt == std::string_view::npos ? std::string_view::npos : lt - pos_);
    if (lt == std::string_view::npos) {
      pos_ = doc_.size();
      return text;
    }
    tag_start_ = lt;
    if (doc_.compare(lt, 4, "<!--") == 0) {
      auto end = doc_.find("-->", lt + 4);
      if (end == std::string_view::npos) throw ParseError("unterminated comment", line_at(lt));
      pos_ = end + 3;
      tag.emplace();  // empty name: ignorable
      return text;
    }
    auto gt = doc_.find('>', lt + 1);
    auto next_lt = doc_.find('<', lt + 1);
    if (gt == std::string_view::npos || (next_lt != std::string_view::npos && next_lt < gt)) {
      throw ParseError("unterminated tag", line_at(lt));
    }
    pos_ = gt + 1;
    std::string_view body = doc_.substr(lt + 1, gt - lt - 1);
    tag.emplace();
    if (body.empty()) throw ParseError("empty tag", line_at(lt));
    if (body.front() == '?' || body.front() == '!') return text;  // declarations
    parse_tag(body, *tag);
    return text;
  }

  std::size_t tag_line() const { return line_at(tag_start_); }
  bool done() const { return pos_ >= doc_.size(); }

private:
  void parse_tag(std::string_view body, Tag& tag) const {
    std::size_t i = 0;
    if (body[i] == '/') {
      tag.closing = true;
      ++i;
    }
    if (!body.empty() && body.back() == '/') {
      tag.self_closing = true;
      body.remove_suffix(1);
    }
    std::size_t start = i;
    while (i < body.size() && name_char(body[i])) ++i;
    if (i == start) throw ParseError("tag without a name", tag_line());
    tag.name = ascii_lower(body.substr(start, i - start));
    while (i < body.size()) {
      while (i < body.size() && std::isspace(static_cast<unsigned char>(body[i]))) ++i;
      if (i >= body.size()) break;
      std::size_t k = i;
      while (i < body.size() && name_char(body[i])) ++i;
      if (k == i) throw ParseError("malformed attribute in <" + tag.name + ">", tag_line());
      std::string key = ascii_lower(body.substr(k, i - k));
      while (i < body.size() && std::isspace(static_cast<unsigned char>(body[i]))) ++i;
      std::string value;
      if (i < body.size() && body[i] == '=') {
        ++i;
        while (i < body.size() && std::isspace(static_cast<unsigned char>(body[i]))) ++i;
        if (i < body.size() && (body[i] == '"' || body[i] == '\'')) {
          char q = body[i++];
          auto close = body.find(q, i);
          if (close == std::string_view::npos) {
            throw ParseError("unterminated attribute value in <" + tag.name + ">", tag_line());
          }
          value = decode_entities(body.substr(i, close - i));
          i = close + 1;
        } else {
          std::size_t v = i;
          while (i < body.size() && !std::isspace(static_cast<unsigned char>(body[i]))) ++i;
          value = decode_entities(body.substr(v, i - v));
        }
      }
      tag.attrs[key] = value;
    }
  }

  std::string_view doc_;
  std::size_t pos_ = 0;
  std::size_t tag_start_ = 0;
};

struct PendingInstance {
  std::string id;
  std::size_t line = 0;
  std::vector<std::string> senses;
  bool have_context = false;
  bool context_closed = false;
  bool in_head = false;
  bool head_seen = false;
  std::string before, head, after;
};

}  // namespace

XmlReadResult read_senseval_xml(std::string_view document, const TokenizerConfig& config, Split split) {
  XmlReadResult result;
  std::map<std::string, std::size_t> slot;
  Scanner sc(document);
  std::optional<std::string> lexelt;
  std::optional<PendingInstance> inst;
  bool in_context = false;

  auto finish = [&](PendingInstance& p) {
    if (!p.head_seen || (split == Split::train && p.senses.empty())) {
      ++result.skipped;
      return;
    }
    auto head_tokens = tokenize(decode_entities(p.head), config);
    if (head_tokens.empty()) {
      ++result.skipped;
      return;
    }
    Instance out;
    out.lexelt = *lexelt;
    out.id = p.id;
    out.gold_senses = p.senses;
    out.tokens = tokenize(decode_entities(p.before), config);
    out.target_index = out.tokens.size();
    std::string head_word = head_tokens.front();
    for (std::size_t k = 1; k < head_tokens.size(); ++k) head_word += "_" + head_tokens[k];
    out.tokens.push_back(std::move(head_word));
    auto rest = tokenize(decode_entities(p.after), config);
    out.tokens.insert(out.tokens.end(), rest.begin(), rest.end());

    auto [it, fresh] = slot.try_emplace(out.lexelt, result.lexelts.size());
    if (fresh) {
      result.lexelts.emplace_back();
      result.lexelts.back().lexelt = out.lexelt;
    }
    auto& ds = result.lexelts[it->second];
    auto& bucket = split == Split::train ? ds.train : ds.test;
    auto dup = [&](const Instance& other) { return other.id == out.id; };
    if (std::any_of(ds.train.begin(), ds.train.end(), dup) || std::any_of(ds.test.begin(), ds.test.end(), dup)) {
      throw ValidationError("line " + std::to_string(p.line) + ": duplicate instance id " + out.id);
    }
    bucket.push_back(std::move(out));
  };

  std::optional<Tag> tag;
  while (!sc.done()) {
    auto text = sc.next(tag);
    if (in_context && inst) {
      auto& p = *inst;
      (p.in_head ? p.head : (p.head_seen ? p.after : p.before)).append(text);
    }
    if (!tag || tag->name.empty()) continue;
    const auto line = sc.tag_line();
    const auto& name = tag->name;

    if (name == "lexelt") {
      if (tag->closing) {
        if (inst) throw ParseError("</lexelt> inside an open instance", line);
        lexelt.reset();
      } else {
        auto it = tag->attrs.find("item");
        if (it == tag->attrs.end() || it->second.empty()) throw ParseError("<lexelt> without item", line);
        lexelt = it->second;
      }
    } else if (name == "instance") {
      if (tag->closing) {
        if (!inst) throw ParseError("</instance> without <instance>", line);
        if (in_context) throw ParseError("</instance> inside an open context", line);
        finish(*inst);
        inst.reset();
      } else {
        if (inst) throw ParseError("nested <instance>", line);
        if (!lexelt) throw ParseError("<instance> outside of <lexelt>", line);
        auto it = tag->attrs.find("id");
        if (it == tag->attrs.end() || it->second.empty()) throw ParseError("<instance> without id", line);
        inst.emplace();
        inst->id = it->second;
        inst->line = line;
      }
    } else if (name == "answer") {
      if (!inst) throw ParseError("<answer> outside of <instance>", line);
      if (!tag->closing) {
        auto it = tag->attrs.find("senseid");
        if (it == tag->attrs.end() || it->second.empty()) throw ParseError("<answer> without senseid", line);
        if (std::find(inst->senses.begin(), inst->senses.end(), it->second) == inst->senses.end()) {
          inst->senses.push_back(it->second);
        }
      }
    } else if (name == "context") {
      if (!inst) throw ParseError("<context> outside of <instance>", line);
      if (tag->closing) {
        if (!in_context) throw ParseError("</context> without <context>", line);
        if (inst->in_head) throw ParseError("</context> inside an open <head>", line);
        in_context = false;
        inst->context_closed = true;
      } else {
        if (in_context || inst->have_context) throw ParseError("second <context> in instance", line);
        in_context = true;
        inst->have_context = true;
      }
    } else if (name == "head") {
      if (!in_context) throw ParseError("<head> outside of <context>", line);
      auto& p = *inst;
      if (tag->closing) {
        if (p.in_head) {
          p.in_head = false;
        } else if (!p.head_seen) {
          throw ParseError("</head> without <head>", line);
        }
      } else if (!p.head_seen) {
        p.in_head = true;
        p.head_seen = true;
      }
    }
    // Any other tag (corpus, sentence or satellite markup) is dropped.
  }
  if (inst) throw ParseError("unexpected end of document inside instance " + inst->id, sc.line_at(document.size()));
  return result;
}

XmlReadResult read_senseval_xml_file(const std::filesystem::path& path, const TokenizerConfig& config, Split split) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  const std::string doc = buf.str();
  return read_senseval_xml(std::string_view(doc), config, split);
}

}  // namespace wsd
