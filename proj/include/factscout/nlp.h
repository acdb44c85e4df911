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

// Tokenization, POS tagging, chunking of (indicator, value, unit) triples
// and rule-based entity recognition. Grammar and gazetteer are immutable
// once loaded and may be shared between threads.

#pragma once

#include <map>
#include <optional>
#include <regex>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "factscout/decimal.h"
#include "factscout/docmodel.h"

namespace factscout::nlp {

// Lower-cases ASCII letters; other bytes are left alone.
std::string lowercase(std::string_view text);

class Gazetteer {
 public:
  Gazetteer() = default;

  // {"units": {"<canonical>": ["<surface>", ...]}, "locations": [...],
  //  "organizations": [...], "persons": [...], "month_names": [...],
  //  "time_words": [...]}
  // Throws kInvalidValue when a unit surface form maps to two canonicals.
  static Gazetteer from_json(const json &j);
  static Gazetteer load(const std::string &path);
  static const Gazetteer &builtin();
  static const json &builtin_json();

  // Case-insensitive; surface forms are single tokens or space-joined
  // token sequences ("metric tonnes").
  std::optional<std::string> canonical_unit(std::string_view surface) const;
  bool is_unit(std::string_view surface) const {
    return canonical_unit(surface).has_value();
  }
  size_t max_unit_words() const { return max_unit_words_; }

  // Longest-match lookup for LOCATION / ORGANIZATION / PERSON phrases; the
  // key is the lower-cased, space-joined token sequence.
  std::optional<EntityKind> name_kind(std::string_view phrase) const;
  size_t max_name_words() const { return max_name_words_; }

  bool is_month(std::string_view word) const;
  bool is_time_word(std::string_view word) const;

  const std::map<std::string, std::string> &unit_surfaces() const {
    return unit_surfaces_;
  }

 private:
  std::map<std::string, std::string> unit_surfaces_;  // surface -> canonical
  std::map<std::string, EntityKind> names_;
  std::set<std::string> months_;
  std::set<std::string> time_words_;
  size_t max_unit_words_ = 1;
  size_t max_name_words_ = 1;
};

// Splits on whitespace and punctuation. Numbers keep internal separators
// ("1,518", "2.3", "10:30"); words keep internal hyphens and apostrophes;
// "a/b" stays whole when the joined form, or both sides, are units.
std::vector<Token> tokenize(std::string_view text,
                            const Gazetteer &gaz = Gazetteer::builtin());

// Numeric literal with optional well-formed grouping commas and optional
// fraction: "1518", "1,518", "2.3", "-4".
bool is_number(std::string_view text);
bool is_scale_word(std::string_view word);

// Assigns Penn-style tags in place: closed-class lexicon, unit gazetteer
// (NN / NNS), numeric pattern (CD), suffix rules, default NN.
void pos_tag(std::vector<Token> &tokens,
             const Gazetteer &gaz = Gazetteer::builtin());

// "1,518" -> 1518, "2.3 million" -> 2300000. Throws kNotANumber.
Decimal normalize_value(std::string_view text);

// Ordered named patterns over POS-tag sequences. Pattern syntax:
//   TAG        token whose tag matches (upper-case; '.' is any tag char,
//              '.?' / '.*' optional tag chars), e.g. NN, VB.?
//   word       token whose lower-cased text equals `word`, e.g. of, %
//   ( ... )    grouping; (NAME: ... ) captures INDICATOR, VALUE or UNIT
//   a|b        alternation inside a group
//   * + ? {m,n}  token-level repetition, optionally followed by ? (lazy)
// One rule per line as `NAME = pattern`; '#' starts a comment.
struct ChunkRule {
  std::string name;
  std::string pattern;
  std::regex compiled;
  int value_group = 0;
  int indicator_group = 0;  // 0 when absent
  int unit_group = 0;
};

class ChunkGrammar {
 public:
  // Throws kInvalidGrammar.
  static ChunkGrammar parse(std::string_view text);
  static ChunkGrammar load(const std::string &path);
  static const ChunkGrammar &builtin();
  static std::string_view builtin_text();

  const std::vector<ChunkRule> &rules() const { return rules_; }

 private:
  std::vector<ChunkRule> rules_;
};

// Translates one pattern into the ECMAScript regex matched against the
// encoded tag sequence. Exposed for tests.
ChunkRule compile_rule(const std::string &name, const std::string &pattern);

// Tokenizes and tags `sentence` when it has no tokens yet, or tags tokens
// that have no POS.
void annotate(Sentence &sentence, const Gazetteer &gaz = Gazetteer::builtin());

std::vector<ExtractionRecord> chunk_extract(
    const Sentence &sentence,
    const ChunkGrammar &grammar = ChunkGrammar::builtin(),
    const Gazetteer &gaz = Gazetteer::builtin());

std::vector<Entity> ner(const Sentence &sentence,
                        const Gazetteer &gaz = Gazetteer::builtin());

}  // namespace factscout::nlp
