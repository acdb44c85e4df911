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

#include <algorithm>
#include <cctype>

#include "factscout/nlp.h"

namespace factscout::nlp {

namespace {

struct Candidate {
  EntityKind kind;
  size_t first;  // token index
  size_t last;   // inclusive
  bool from_pattern;
};

bool is_year(std::string_view w) {
  if (w.size() != 4) return false;
  for (char c : w) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  int y = std::stoi(std::string(w));
  return y >= 1900 && y <= 2099;
}

bool is_day(std::string_view w) {
  if (w.empty() || w.size() > 2) return false;
  for (char c : w) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  int d = std::stoi(std::string(w));
  return d >= 1 && d <= 31;
}

bool is_clock(std::string_view w) {
  size_t colon = w.find(':');
  if (colon == std::string_view::npos || colon == 0 || colon > 2 ||
      w.size() - colon - 1 != 2)
    return false;
  for (size_t i = 0; i < w.size(); ++i) {
    if (i != colon && !std::isdigit(static_cast<unsigned char>(w[i])))
      return false;
  }
  return std::stoi(std::string(w.substr(0, colon))) < 24 &&
         std::stoi(std::string(w.substr(colon + 1))) < 60;
}

bool is_currency(std::string_view w) {
  return w == "$" || w == "\xE2\x82\xAC" || w == "\xC2\xA3" ||
         w == "\xC2\xA5" || w == "AUD" || w == "USD" || w == "A$";
}

bool is_capitalized(std::string_view w) {
  return !w.empty() && std::isupper(static_cast<unsigned char>(w[0]));
}

}  // namespace

std::vector<Entity> ner(const Sentence &input, const Gazetteer &gaz) {
  Sentence sentence = input;
  if (sentence.tokens.empty()) sentence.tokens = tokenize(sentence.text, gaz);
  const std::vector<Token> &tok = sentence.tokens;
  const size_t n = tok.size();
  auto word = [&](size_t i) -> std::string {
    return i < n ? lowercase(tok[i].text) : std::string();
  };

  std::vector<Candidate> cands;
  for (size_t i = 0; i < n; ++i) {
    const std::string w = word(i);

    // PERCENT: number followed by "%", "percent" or "per cent".
    if (is_number(tok[i].text)) {
      if (word(i + 1) == "%" || word(i + 1) == "percent") {
        cands.push_back({EntityKind::kPercent, i, i + 1, true});
      } else if (word(i + 1) == "per" && word(i + 2) == "cent") {
        cands.push_back({EntityKind::kPercent, i, i + 2, true});
      }
    }

    // MONEY: currency symbol or code, number, optional scale word.
    if (is_currency(tok[i].text) && i + 1 < n && is_number(tok[i + 1].text)) {
      size_t last = i + 1;
      if (is_scale_word(word(i + 2))) last = i + 2;
      cands.push_back({EntityKind::kMoney, i, last, true});
    }

    // DATE: year, or [day] month [day] [,] [year].
    if (is_year(w)) cands.push_back({EntityKind::kDate, i, i, true});
    if (gaz.is_month(w)) {
      size_t first = i, last = i;
      if (i > 0 && is_day(tok[i - 1].text)) first = i - 1;
      if (is_day(word(i + 1))) last = i + 1;
      size_t y = last + 1;
      if (word(y) == "," && is_year(word(y + 1))) ++y;
      if (is_year(word(y))) last = y;
      // A bare month word ("may") needs a capital or a day/year next to it.
      if (first != last || is_capitalized(tok[i].text)) {
        cands.push_back({EntityKind::kDate, first, last, true});
      }
    }

    // TIME: clock pattern with optional am/pm, or a time word.
    if (is_clock(w)) {
      size_t last = i;
      if (word(i + 1) == "am" || word(i + 1) == "pm") last = i + 1;
      cands.push_back({EntityKind::kTime, i, last, true});
    } else if (gaz.is_time_word(w)) {
      cands.push_back({EntityKind::kTime, i, i, true});
    }

    // Gazetteer names, longest match at this start.
    std::string phrase;
    std::optional<Candidate> best;
    for (size_t j = i; j < n && j - i < gaz.max_name_words(); ++j) {
      if (!phrase.empty()) phrase += ' ';
      phrase += word(j);
      if (auto kind = gaz.name_kind(phrase)) {
        best = Candidate{*kind, i, j, false};
      }
    }
    if (best) cands.push_back(*best);
  }

  auto span_of = [&](const Candidate &c) {
    return Span{tok[c.first].span.start, tok[c.last].span.end};
  };
  std::stable_sort(cands.begin(), cands.end(),
                   [&](const Candidate &a, const Candidate &b) {
                     size_t la = span_of(a).length(), lb = span_of(b).length();
                     if (la != lb) return la > lb;
                     if (a.from_pattern != b.from_pattern) return a.from_pattern;
                     return a.first < b.first;
                   });

  std::vector<Entity> out;
  for (const Candidate &c : cands) {
    Span span = span_of(c);
    bool clash = std::any_of(out.begin(), out.end(), [&](const Entity &e) {
      return e.span.overlaps(span);
    });
    if (clash) continue;
    out.push_back(Entity{c.kind,
                         sentence.text.substr(span.start, span.length()), span});
  }
  std::sort(out.begin(), out.end(), [](const Entity &a, const Entity &b) {
    return a.span.start < b.span.start;
  });
  return out;
}

}  // namespace factscout::nlp
