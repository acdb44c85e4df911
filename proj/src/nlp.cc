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

#include "factscout/nlp.h"

#include <cctype>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include "factscout/builtin_resources.h"

namespace factscout::nlp {

namespace {

bool is_ascii_alnum(unsigned char c) { return std::isalnum(c) != 0; }
bool is_digit(unsigned char c) { return c >= '0' && c <= '9'; }

// Length of the UTF-8 sequence starting at `c`.
size_t utf8_length(unsigned char c) {
  if (c < 0x80) return 1;
  if ((c & 0xE0) == 0xC0) return 2;
  if ((c & 0xF0) == 0xE0) return 3;
  if ((c & 0xF8) == 0xF0) return 4;
  return 1;
}

// Multi-byte sequences that behave as punctuation: currency symbols,
// typographic quotes and dashes.
bool is_multibyte_symbol(std::string_view text, size_t i) {
  auto at = [&](size_t k) {
    return i + k < text.size() ? static_cast<unsigned char>(text[i + k]) : 0;
  };
  if (at(0) == 0xC2 && (at(1) == 0xA3 || at(1) == 0xA5)) return true;  // £ ¥
  if (at(0) == 0xE2 && at(1) == 0x82 && at(2) == 0xAC) return true;    // €
  if (at(0) == 0xE2 && at(1) == 0x80) return true;  // curly quotes, dashes, ellipsis
  return false;
}

bool is_word_start(std::string_view text, size_t i) {
  unsigned char c = static_cast<unsigned char>(text[i]);
  if (c >= 0x80) return !is_multibyte_symbol(text, i);
  return std::isalpha(c) || c == '_';
}

bool is_word_char(std::string_view text, size_t i) {
  unsigned char c = static_cast<unsigned char>(text[i]);
  if (c >= 0x80) return !is_multibyte_symbol(text, i);
  return is_ascii_alnum(c) || c == '_';
}

// End of the word starting at `i`; joins across internal '-' and '\''.
size_t scan_word(std::string_view text, size_t i) {
  while (i < text.size()) {
    if (is_word_char(text, i)) {
      i += utf8_length(static_cast<unsigned char>(text[i]));
    } else if ((text[i] == '-' || text[i] == '\'') && i + 1 < text.size() &&
               is_word_char(text, i + 1)) {
      ++i;
    } else {
      break;
    }
  }
  return i;
}

size_t scan_number(std::string_view text, size_t i) {
  while (i < text.size()) {
    unsigned char c = static_cast<unsigned char>(text[i]);
    if (is_digit(c)) {
      ++i;
    } else if ((c == ',' || c == '.' || c == ':') && i + 1 < text.size() &&
               is_digit(static_cast<unsigned char>(text[i + 1]))) {
      ++i;
    } else {
      break;
    }
  }
  return i;
}

EntityKind name_kind_for(const std::string &key) {
  if (key == "locations") return EntityKind::kLocation;
  if (key == "organizations") return EntityKind::kOrganization;
  return EntityKind::kPerson;
}

// Space-joined lower-cased token texts of `phrase`.
std::string normalize_phrase(std::string_view phrase) {
  std::string out;
  for (const Token &t : tokenize(phrase, Gazetteer())) {
    if (!out.empty()) out += ' ';
    out += lowercase(t.text);
  }
  return out;
}

size_t word_count(std::string_view phrase) {
  size_t n = 1;
  for (char c : phrase) n += c == ' ';
  return n;
}

}  // namespace

std::string lowercase(std::string_view text) {
  std::string out(text);
  for (char &c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

// ---------------------------------------------------------------------------
// Gazetteer

Gazetteer Gazetteer::from_json(const json &j) {
  Gazetteer g;
  std::set<std::string> canonicals;
  if (j.contains("units")) {
    for (const auto &[canonical, surfaces] : j.at("units").items()) {
      if (!canonicals.insert(lowercase(canonical)).second) {
        throw Error(ErrorCode::kInvalidValue,
                    "duplicate canonical unit: " + canonical);
      }
      std::vector<std::string> forms = surfaces.get<std::vector<std::string>>();
      forms.push_back(canonical);
      for (const std::string &form : forms) {
        // Slash-joined units are single tokens, so key them verbatim.
        std::string key = form.find('/') != std::string::npos
                              ? lowercase(form)
                              : normalize_phrase(form);
        auto [it, inserted] = g.unit_surfaces_.emplace(key, canonical);
        if (!inserted && it->second != canonical) {
          throw Error(ErrorCode::kInvalidValue,
                      "unit surface '" + form + "' maps to both '" +
                          it->second + "' and '" + canonical + "'");
        }
        g.max_unit_words_ = std::max(g.max_unit_words_, word_count(key));
      }
    }
  }
  for (const char *key : {"locations", "organizations", "persons"}) {
    if (!j.contains(key)) continue;
    for (const std::string &name : j.at(key).get<std::vector<std::string>>()) {
      std::string phrase = normalize_phrase(name);
      g.names_.emplace(phrase, name_kind_for(key));
      g.max_name_words_ = std::max(g.max_name_words_, word_count(phrase));
    }
  }
  if (j.contains("month_names")) {
    for (const std::string &m : j.at("month_names").get<std::vector<std::string>>())
      g.months_.insert(lowercase(m));
  }
  if (j.contains("time_words")) {
    for (const std::string &w : j.at("time_words").get<std::vector<std::string>>())
      g.time_words_.insert(lowercase(w));
  }
  return g;
}

Gazetteer Gazetteer::load(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoFailure, "cannot open gazetteer " + path);
  try {
    return from_json(json::parse(in));
  } catch (const json::exception &e) {
    throw Error(ErrorCode::kInvalidValue, path + ": " + e.what());
  }
}

const json &Gazetteer::builtin_json() {
  static const json j = json::parse(resources::kGazetteerJson);
  return j;
}

const Gazetteer &Gazetteer::builtin() {
  static const Gazetteer g = from_json(builtin_json());
  return g;
}

std::optional<std::string> Gazetteer::canonical_unit(
    std::string_view surface) const {
  auto it = unit_surfaces_.find(lowercase(surface));
  if (it == unit_surfaces_.end()) return std::nullopt;
  return it->second;
}

std::optional<EntityKind> Gazetteer::name_kind(std::string_view phrase) const {
  auto it = names_.find(lowercase(phrase));
  if (it == names_.end()) return std::nullopt;
  return it->second;
}

bool Gazetteer::is_month(std::string_view word) const {
  return months_.count(lowercase(word)) > 0;
}

bool Gazetteer::is_time_word(std::string_view word) const {
  return time_words_.count(lowercase(word)) > 0;
}

// ---------------------------------------------------------------------------
// Tokenizer

std::vector<Token> tokenize(std::string_view text, const Gazetteer &gaz) {
  std::vector<Token> tokens;
  size_t i = 0;
  auto emit = [&](size_t start, size_t end) {
    tokens.push_back(Token{std::string(text.substr(start, end - start)),
                           Span{start, end}, ""});
  };
  while (i < text.size()) {
    unsigned char c = static_cast<unsigned char>(text[i]);
    if (std::isspace(c)) {
      ++i;
      continue;
    }
    size_t start = i;
    if (is_digit(c)) {
      i = scan_number(text, i);
      emit(start, i);
    } else if (is_word_start(text, i)) {
      i = scan_word(text, i);
      if (i + 1 < text.size() && text[i] == '/' && is_word_start(text, i + 1)) {
        size_t right_end = scan_word(text, i + 1);
        std::string_view left = text.substr(start, i - start);
        std::string_view right = text.substr(i + 1, right_end - i - 1);
        std::string_view joined = text.substr(start, right_end - start);
        if (gaz.is_unit(joined) || (gaz.is_unit(left) && gaz.is_unit(right))) {
          i = right_end;
        }
      }
      emit(start, i);
    } else if (is_multibyte_symbol(text, i)) {
      i += utf8_length(c);
      emit(start, i);
    } else {
      i += utf8_length(c);
      emit(start, std::min(i, text.size()));
    }
  }
  return tokens;
}

bool is_number(std::string_view text) {
  size_t i = 0;
  if (i < text.size() && (text[i] == '-' || text[i] == '+')) ++i;
  size_t group = 0;
  bool grouped = false;
  bool first_group = true;
  size_t digits = 0;
  for (; i < text.size() && text[i] != '.'; ++i) {
    char c = text[i];
    if (c == ',') {
      if (group == 0 || (first_group && group > 3) ||
          (!first_group && group != 3)) {
        return false;
      }
      grouped = true;
      first_group = false;
      group = 0;
    } else if (is_digit(static_cast<unsigned char>(c))) {
      ++group;
      ++digits;
    } else {
      return false;
    }
  }
  if (digits == 0) return false;
  if (grouped && group != 3) return false;
  if (i < text.size()) {  // fraction
    ++i;
    if (i == text.size()) return false;
    for (; i < text.size(); ++i) {
      if (!is_digit(static_cast<unsigned char>(text[i]))) return false;
    }
  }
  return true;
}

namespace {

int scale_exponent(std::string_view word) {
  std::string w = lowercase(word);
  if (w == "thousand") return 3;
  if (w == "million") return 6;
  if (w == "billion") return 9;
  return -1;
}

bool is_clock(std::string_view text) {
  size_t colon = text.find(':');
  if (colon == std::string_view::npos || colon == 0 || colon > 2) return false;
  if (text.size() - colon - 1 != 2) return false;
  for (size_t i = 0; i < text.size(); ++i) {
    if (i != colon && !is_digit(static_cast<unsigned char>(text[i])))
      return false;
  }
  return true;
}

const std::unordered_map<std::string, std::string> &lexicon() {
  static const std::unordered_map<std::string, std::string> lex = [] {
    std::unordered_map<std::string, std::string> m;
    auto add = [&](const char *tag, std::initializer_list<const char *> words) {
      for (const char *w : words) m.emplace(w, tag);
    };
    add("DT", {"the", "a", "an", "this", "that", "these", "those", "each",
               "every", "some", "any", "no", "all", "both", "another"});
    add("IN", {"of", "in", "on", "at", "by", "for", "with", "from", "during",
               "per", "into", "over", "under", "between", "than", "about",
               "above", "below", "across", "after", "before", "since",
               "through", "within", "without", "among", "against", "via",
               "around", "until", "while", "because", "if", "whereas"});
    add("TO", {"to"});
    add("CC", {"and", "or", "but", "nor"});
    add("PRP", {"it", "they", "we", "he", "she", "i", "you", "them", "us"});
    add("PRP$", {"its", "their", "our", "his", "her", "my", "your"});
    add("MD", {"will", "would", "can", "could", "may", "might", "shall",
               "should", "must"});
    add("VBZ", {"is", "has", "does"});
    add("VBP", {"are", "have", "do"});
    add("VBD", {"was", "were", "had", "did", "rose", "fell", "grew", "made",
                "took"});
    add("VB", {"be"});
    add("VBN", {"been"});
    add("VBG", {"being"});
    add("WDT", {"which", "whose"});
    add("WP", {"who", "what"});
    add("EX", {"there"});
    add("RB", {"not", "also", "very", "only", "approximately", "nearly",
               "almost", "just", "still", "further", "again", "too"});
    add("JJ", {"average", "total", "annual", "gross", "net", "regional",
               "native", "new", "more", "most", "less", "least", "high",
               "low", "higher", "lower", "large", "small", "other", "several",
               "many", "much", "irrigated", "dryland", "mean", "overall",
               "national", "domestic"});
    add("CD", {"one", "two", "three", "four", "five", "six", "seven", "eight",
               "nine", "ten", "hundred", "thousand", "million", "billion"});
    add(".", {".", "!", "?"});
    add(",", {","});
    add(":", {":", ";", "-", "--", "\xE2\x80\x93", "\xE2\x80\x94"});
    add("-LRB-", {"(", "["});
    add("-RRB-", {")", "]"});
    add("``", {"\"", "\xE2\x80\x9C", "'", "\xE2\x80\x98"});
    add("''", {"\xE2\x80\x9D", "\xE2\x80\x99"});
    add("$", {"$", "\xE2\x82\xAC", "\xC2\xA3", "\xC2\xA5"});
    return m;
  }();
  return lex;
}

bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() &&
         s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

std::string tag_word(const Token &tok, const Gazetteer &gaz) {
  std::string w = lowercase(tok.text);
  const auto &lex = lexicon();
  if (auto it = lex.find(w); it != lex.end()) return it->second;
  if (gaz.is_unit(w)) {
    bool plural = w.size() > 2 && ends_with(w, "s") && !ends_with(w, "ss");
    return plural ? "NNS" : "NN";
  }
  if (is_number(w) || is_clock(w)) return "CD";
  if (w.size() > 4 && ends_with(w, "ed")) return "VBN";
  if (w.size() > 4 && ends_with(w, "ing")) return "VBG";
  if (w.size() > 3 && ends_with(w, "ly")) return "RB";
  if (w.size() > 3 && ends_with(w, "s") && !ends_with(w, "ss") &&
      !ends_with(w, "us") && !ends_with(w, "is")) {
    return "NNS";
  }
  if (!w.empty() && !is_ascii_alnum(static_cast<unsigned char>(w[0])) &&
      static_cast<unsigned char>(w[0]) < 0x80) {
    return "SYM";
  }
  return "NN";
}

}  // namespace

bool is_scale_word(std::string_view word) { return scale_exponent(word) > 0; }

void pos_tag(std::vector<Token> &tokens, const Gazetteer &gaz) {
  for (Token &t : tokens) t.pos = tag_word(t, gaz);
}

Decimal normalize_value(std::string_view text) {
  std::istringstream parts{std::string(text)};
  std::string number, scale, extra;
  parts >> number >> scale >> extra;
  if (number.empty() || !extra.empty() || !is_number(number)) {
    throw Error(ErrorCode::kNotANumber,
                "not a number: '" + std::string(text) + "'");
  }
  int exponent = 0;
  if (!scale.empty()) {
    exponent = scale_exponent(scale);
    if (exponent < 0) {
      throw Error(ErrorCode::kNotANumber,
                  "unknown scale word: '" + scale + "'");
    }
  }
  std::string digits;
  for (char c : number) {
    if (c != ',') digits += c;
  }
  auto value = Decimal::parse(digits);
  if (!value) {
    throw Error(ErrorCode::kNotANumber, "not a number: '" + number + "'");
  }
  return value->shifted(exponent);
}

void annotate(Sentence &sentence, const Gazetteer &gaz) {
  if (sentence.tokens.empty()) sentence.tokens = tokenize(sentence.text, gaz);
  for (Token &t : sentence.tokens) {
    if (t.pos.empty()) t.pos = tag_word(t, gaz);
  }
}

}  // namespace factscout::nlp
