// Copyright 2026 The FactScout Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Chunking works on an encoded string with one record per token:
//
//   \x1d TAG \x1f lower-cased-word \x1e
//
// A grammar pattern is compiled into an ECMAScript regex over that string;
// the record delimiters keep every atom aligned to whole tokens.

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

#include "factscout/builtin_resources.h"
#include "factscout/nlp.h"

namespace factscout::nlp {

namespace {

constexpr char kTokenStart = '\x1d';
constexpr char kTagEnd = '\x1f';
constexpr char kTokenEnd = '\x1e';

std::string regex_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (std::string_view("\\^$.|?*+()[]{}").find(c) != std::string_view::npos)
      out += '\\';
    out += c;
  }
  return out;
}

class PatternCompiler {
 public:
  PatternCompiler(std::string name, std::string_view pattern)
      : name_(std::move(name)), src_(pattern) {}

  ChunkRule compile() {
    std::string body = parse_alternation();
    skip_space();
    if (pos_ != src_.size()) fail("unexpected ')'");
    ChunkRule rule;
    rule.name = name_;
    rule.pattern = std::string(src_);
    for (const auto &[group, index] : groups_) {
      if (group == "VALUE") rule.value_group = index;
      if (group == "INDICATOR") rule.indicator_group = index;
      if (group == "UNIT") rule.unit_group = index;
    }
    if (rule.value_group == 0) fail("rule must capture VALUE exactly once");
    try {
      rule.compiled = std::regex(body, std::regex::ECMAScript);
    } catch (const std::regex_error &e) {
      fail(std::string("regex error: ") + e.what());
    }
    return rule;
  }

 private:
  [[noreturn]] void fail(const std::string &why) const {
    throw Error(ErrorCode::kInvalidGrammar,
                "rule " + name_ + " at column " + std::to_string(pos_ + 1) +
                    ": " + why);
  }

  void skip_space() {
    while (pos_ < src_.size() &&
           std::isspace(static_cast<unsigned char>(src_[pos_])))
      ++pos_;
  }

  bool at(char c) const { return pos_ < src_.size() && src_[pos_] == c; }

  std::string parse_alternation() {
    std::vector<std::string> branches{parse_sequence()};
    while (at('|')) {
      ++pos_;
      branches.push_back(parse_sequence());
    }
    if (branches.size() == 1) return branches[0];
    std::string out = "(?:";
    for (size_t i = 0; i < branches.size(); ++i) {
      if (i) out += '|';
      out += branches[i];
    }
    return out + ")";
  }

  std::string parse_sequence() {
    std::string out;
    bool any = false;
    for (;;) {
      skip_space();
      if (pos_ >= src_.size() || at('|') || at(')')) break;
      out += parse_item();
      any = true;
    }
    if (!any) fail("empty sequence");
    return out;
  }

  std::string parse_item() {
    std::string primary = parse_primary();
    std::string out = primary;
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      std::string quant;
      if (c == '*' || c == '+' || c == '?') {
        quant = c;
        ++pos_;
      } else if (c == '{') {
        size_t close = src_.find('}', pos_);
        if (close == std::string_view::npos) fail("unterminated '{'");
        std::string_view inner = src_.substr(pos_ + 1, close - pos_ - 1);
        for (char q : inner) {
          if (!std::isdigit(static_cast<unsigned char>(q)) && q != ',')
            fail("bad repetition");
        }
        if (inner.empty() || inner[0] == ',') fail("bad repetition");
        quant = "{" + std::string(inner) + "}";
        pos_ = close + 1;
      } else {
        break;
      }
      if (at('?')) {  // lazy
        quant += '?';
        ++pos_;
      }
      out = "(?:" + out + ")" + quant;
    }
    return out;
  }

  std::string parse_primary() {
    if (at('(')) {
      ++pos_;
      std::string capture;
      size_t save = pos_;
      while (pos_ < src_.size() &&
             (std::isupper(static_cast<unsigned char>(src_[pos_])) ||
              src_[pos_] == '_'))
        ++pos_;
      if (pos_ > save && at(':')) {
        capture = std::string(src_.substr(save, pos_ - save));
        ++pos_;
        if (capture != "VALUE" && capture != "INDICATOR" && capture != "UNIT")
          fail("unknown capture " + capture);
        if (groups_.count(capture)) fail("duplicate capture " + capture);
        groups_[capture] = ++group_count_;
      } else {
        pos_ = save;
      }
      std::string inner = parse_alternation();
      if (!at(')')) fail("missing ')'");
      ++pos_;
      return capture.empty() ? "(?:" + inner + ")" : "(" + inner + ")";
    }
    return parse_atom();
  }

  std::string parse_atom() {
    size_t start = pos_;
    if (pos_ < src_.size() && std::isupper(static_cast<unsigned char>(src_[pos_]))) {
      // Tag pattern: [A-Z0-9$]+ with '.', '.?', '.*' wildcards.
      std::string re;
      while (pos_ < src_.size()) {
        char c = src_[pos_];
        if (std::isupper(static_cast<unsigned char>(c)) ||
            std::isdigit(static_cast<unsigned char>(c)) || c == '$') {
          re += regex_escape(std::string(1, c));
          ++pos_;
        } else if (c == '.') {
          re += "[^\\x1d\\x1e\\x1f]";
          ++pos_;
          if (at('?') || at('*')) re += src_[pos_++];
        } else {
          break;
        }
      }
      return "\\x1d(?:" + re + ")\\x1f[^\\x1e]*\\x1e";
    }
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (std::isspace(static_cast<unsigned char>(c)) ||
          std::string_view("()|{*+?").find(c) != std::string_view::npos)
        break;
      ++pos_;
    }
    if (pos_ == start) fail("expected a tag or word");
    std::string word = lowercase(src_.substr(start, pos_ - start));
    return "\\x1d[^\\x1f]*\\x1f" + regex_escape(word) + "\\x1e";
  }

  std::string name_;
  std::string_view src_;
  size_t pos_ = 0;
  int group_count_ = 0;
  std::map<std::string, int> groups_;
};

// A chunking unit: one token, or a number followed by a scale word
// ("2.3 million"), which chunks as a single CD.
struct ChunkUnit {
  size_t first = 0;  // token index
  size_t last = 0;   // inclusive
  std::string tag;
};

std::vector<ChunkUnit> build_units(const std::vector<Token> &tokens) {
  std::vector<ChunkUnit> units;
  for (size_t i = 0; i < tokens.size(); ++i) {
    ChunkUnit u{i, i, tokens[i].pos};
    if (tokens[i].pos == "CD" && is_number(tokens[i].text) &&
        i + 1 < tokens.size() && is_scale_word(tokens[i + 1].text)) {
      u.last = i + 1;
      ++i;
    }
    units.push_back(u);
  }
  return units;
}

std::string sanitize(std::string_view s) {
  std::string out(s);
  for (char &c : out) {
    if (c == kTokenStart || c == kTagEnd || c == kTokenEnd) c = '?';
  }
  return out;
}

}  // namespace

ChunkRule compile_rule(const std::string &name, const std::string &pattern) {
  return PatternCompiler(name, pattern).compile();
}

ChunkGrammar ChunkGrammar::parse(std::string_view text) {
  ChunkGrammar g;
  std::istringstream in{std::string(text)};
  std::string line;
  std::set<std::string> names;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (size_t hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    size_t first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    size_t eq = line.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorCode::kInvalidGrammar,
                  "line " + std::to_string(lineno) + ": expected NAME = pattern");
    }
    std::string name = line.substr(first, eq - first);
    name.erase(name.find_last_not_of(" \t") + 1);
    std::string pattern = line.substr(eq + 1);
    if (name.empty() || !names.insert(name).second) {
      throw Error(ErrorCode::kInvalidGrammar,
                  "line " + std::to_string(lineno) + ": bad or duplicate name");
    }
    g.rules_.push_back(compile_rule(name, pattern));
  }
  if (g.rules_.empty()) throw Error(ErrorCode::kInvalidGrammar, "no rules");
  return g;
}

ChunkGrammar ChunkGrammar::load(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoFailure, "cannot open grammar " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

std::string_view ChunkGrammar::builtin_text() { return resources::kGrammarText; }

const ChunkGrammar &ChunkGrammar::builtin() {
  static const ChunkGrammar g = parse(builtin_text());
  return g;
}

std::vector<ExtractionRecord> chunk_extract(const Sentence &input,
                                            const ChunkGrammar &grammar,
                                            const Gazetteer &gaz) {
  Sentence sentence = input;
  annotate(sentence, gaz);
  const std::vector<Token> &tokens = sentence.tokens;
  std::vector<ChunkUnit> units = build_units(tokens);

  std::string encoded;
  std::map<size_t, size_t> offset_to_unit;  // record start -> unit index
  for (size_t u = 0; u < units.size(); ++u) {
    offset_to_unit[encoded.size()] = u;
    std::string word;
    for (size_t t = units[u].first; t <= units[u].last; ++t) {
      if (!word.empty()) word += ' ';
      word += lowercase(tokens[t].text);
    }
    encoded += kTokenStart;
    encoded += sanitize(units[u].tag);
    encoded += kTagEnd;
    encoded += sanitize(word);
    encoded += kTokenEnd;
  }
  offset_to_unit[encoded.size()] = units.size();

  // [first, last) unit range of a capture.
  auto unit_range = [&](const std::smatch &m, size_t offset, int group) {
    size_t begin = offset + static_cast<size_t>(m.position(group));
    size_t end = begin + static_cast<size_t>(m.length(group));
    return std::pair{offset_to_unit.at(begin), offset_to_unit.at(end)};
  };
  auto token_span = [&](size_t first_token, size_t last_token) {
    return Span{tokens[first_token].span.start, tokens[last_token].span.end};
  };

  std::vector<Entity> entities = ner(sentence, gaz);
  std::map<size_t, ExtractionRecord> by_value_unit;

  auto accept_match = [&](const std::smatch &m, size_t offset,
                          const ChunkRule &rule) -> bool {
    if (!m[rule.value_group].matched || m.length(rule.value_group) == 0)
      return false;
    auto [v_first, v_end] = unit_range(m, offset, rule.value_group);
    if (v_end - v_first != 1) return false;  // VALUE must be a single unit
    if (by_value_unit.count(v_first)) return false;  // first match wins
    const ChunkUnit &value_unit = units[v_first];
    if (value_unit.tag != "CD") return false;

    // Indicator: drop everything up to the last unit word or determiner
    // inside the capture, then strip function words at either edge.
    if (rule.indicator_group == 0 || !m[rule.indicator_group].matched)
      return false;
    auto [i_first, i_end] = unit_range(m, offset, rule.indicator_group);
    size_t first_tok = units[i_first].first;
    size_t last_tok = units[i_end - 1].last;
    for (size_t t = first_tok; t <= last_tok; ++t) {
      if (gaz.is_unit(tokens[t].text) || tokens[t].pos == "DT")
        first_tok = t + 1;
    }
    auto is_edge_word = [&](size_t t) {
      const std::string &p = tokens[t].pos;
      return p == "IN" || p == "CC" || p == "DT" || p == "TO";
    };
    while (first_tok <= last_tok && is_edge_word(first_tok)) ++first_tok;
    while (last_tok >= first_tok && last_tok > 0 && is_edge_word(last_tok))
      --last_tok;
    if (first_tok > last_tok) return false;

    std::string value_text;
    Span value_span =
        token_span(value_unit.first, value_unit.last);
    value_text = sentence.text.substr(value_span.start, value_span.length());
    Decimal value;
    try {
      value = normalize_value(value_text);
    } catch (const Error &) {
      return false;
    }

    ExtractionRecord rec;
    rec.sentence_ref = SentenceRef{sentence.doc_id, sentence.ordinal};
    rec.indicator_span = token_span(first_tok, last_tok);
    rec.indicator_phrase = sentence.text.substr(rec.indicator_span.start,
                                                rec.indicator_span.length());
    rec.value = value;
    rec.value_span = value_span;

    if (rule.unit_group != 0 && m[rule.unit_group].matched) {
      auto [u_first, u_end] = unit_range(m, offset, rule.unit_group);
      size_t unit_tok = units[u_first].first;
      size_t unit_last = units[u_end - 1].last;
      // Extend to the longest multi-word gazetteer unit ("metric tonnes").
      std::optional<std::string> canonical;
      size_t best_last = unit_last;
      std::string phrase;
      for (size_t t = unit_tok;
           t < tokens.size() && t - unit_tok < gaz.max_unit_words(); ++t) {
        if (!phrase.empty()) phrase += ' ';
        phrase += lowercase(tokens[t].text);
        if (t < unit_last) return false;
        if (auto c = gaz.canonical_unit(phrase)) {
          canonical = c;
          best_last = t;
        }
      }
      rec.unit_span = token_span(unit_tok, best_last);
      if (canonical) {
        rec.unit = *canonical;
      } else {
        rec.unit = sentence.text.substr(rec.unit_span.start,
                                        rec.unit_span.length());
        rec.unit_flagged = true;
      }
    } else {
      return false;  // a triple needs a unit
    }
    rec.entities = entities;
    by_value_unit.emplace(v_first, std::move(rec));
    return true;
  };

  for (const ChunkRule &rule : grammar.rules()) {
    // A rejected match ("In 2019 cotton") must not hide a later one that
    // starts inside it, so the scan resumes one token after its start.
    size_t base = 0;
    std::smatch m;
    while (base < encoded.size() &&
           std::regex_search(encoded.cbegin() + static_cast<std::ptrdiff_t>(base),
                             encoded.cend(), m, rule.compiled,
                             base == 0 ? std::regex_constants::match_default
                                       : std::regex_constants::match_prev_avail)) {
      const size_t match_begin = base + static_cast<size_t>(m.position(0));
      const size_t match_end = match_begin + static_cast<size_t>(m.length(0));
      const size_t offset = base;
      base = offset_to_unit.upper_bound(match_begin)->first;
      if (!accept_match(m, offset, rule)) continue;
      base = std::max(base, match_end);
    }
  }

  std::vector<ExtractionRecord> out;
  for (auto &[unit, rec] : by_value_unit) out.push_back(std::move(rec));
  return out;
}

}  // namespace factscout::nlp
