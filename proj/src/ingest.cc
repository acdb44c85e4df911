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

#include "factscout/ingest.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <set>
#include <sstream>
#include <tuple>

#include "factscout/nlp.h"

namespace factscout::ingest {

namespace {

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)); }

const std::set<std::string> &abbreviations() {
  static const std::set<std::string> kAbbrev = {
      "approx.", "e.g.",  "i.e.",  "mr.",  "mrs.",  "ms.",   "dr.",
      "prof.",   "no.",   "nos.",  "vs.",  "fig.",  "figs.", "inc.",
      "ltd.",    "co.",   "corp.", "st.",  "jan.",  "feb.",  "mar.",
      "apr.",    "jun.",  "jul.",  "aug.", "sep.",  "sept.", "oct.",
      "nov.",    "dec.",  "est.",  "avg.", "ca.",   "cf.",   "al.",
      "p.",      "pp.",   "vol.",  "ed.",  "eds.",  "dept.", "govt.",
      "approx",  "yr.",   "yrs.",  "av.",
  };
  return kAbbrev;
}

bool is_closer(char c) {
  return c == '"' || c == '\'' || c == ')' || c == ']';
}

// Is the '.' at `dot` the end of a guarded abbreviation or an initial?
bool guarded_period(std::string_view text, size_t dot) {
  size_t start = dot;
  while (start > 0 && !is_space(text[start - 1]) && text[start - 1] != '(' &&
         text[start - 1] != '"')
    --start;
  std::string word = nlp::lowercase(text.substr(start, dot - start + 1));
  if (abbreviations().count(word)) return true;
  // Single-letter initial: "J. Smith".
  if (dot - start == 1 && std::isupper(static_cast<unsigned char>(text[start])))
    return true;
  return false;
}

}  // namespace

std::vector<Span> segment_sentence_spans(std::string_view text) {
  std::vector<Span> spans;
  size_t i = 0;
  auto skip_space = [&] {
    while (i < text.size() && is_space(text[i])) ++i;
  };
  skip_space();
  size_t start = i;
  while (i < text.size()) {
    char c = text[i];
    if (c == '.' || c == '!' || c == '?') {
      size_t end = i + 1;
      while (end < text.size() && (text[end] == '.' || text[end] == '!' ||
                                   text[end] == '?'))
        ++end;
      while (end < text.size() && is_closer(text[end])) ++end;
      bool at_break = end == text.size() || is_space(text[end]);
      if (at_break && c == '.' && end == i + 1 && guarded_period(text, i))
        at_break = false;
      if (at_break && end < text.size()) {
        size_t next = end;
        while (next < text.size() && is_space(text[next])) ++next;
        if (next < text.size() &&
            std::islower(static_cast<unsigned char>(text[next])))
          at_break = false;
      }
      if (at_break) {
        spans.push_back(Span{start, end});
        i = end;
        skip_space();
        start = i;
        continue;
      }
      i = end;
      continue;
    }
    ++i;
  }
  if (start < text.size()) {
    size_t end = text.size();
    while (end > start && is_space(text[end - 1])) --end;
    if (end > start) spans.push_back(Span{start, end});
  }
  return spans;
}

std::vector<std::string> segment_sentences(std::string_view text) {
  std::vector<std::string> out;
  for (const Span &s : segment_sentence_spans(text))
    out.emplace_back(text.substr(s.start, s.length()));
  return out;
}

std::vector<Sentence> make_sentences(std::string_view text,
                                     const std::string &doc_id,
                                     int first_ordinal) {
  std::vector<Sentence> out;
  for (std::string &s : segment_sentences(text)) {
    Sentence sentence;
    sentence.doc_id = doc_id;
    sentence.ordinal = first_ordinal++;
    sentence.tokens = nlp::tokenize(s);
    sentence.text = std::move(s);
    out.push_back(std::move(sentence));
  }
  return out;
}

// ---------------------------------------------------------------------------
// TableGrid JSON

void to_json(json &j, const TableGrid &t) {
  j = json{{"doc_id", t.doc_id}, {"ordinal", t.ordinal}, {"rows", t.rows}};
  if (!t.cell_spans.empty()) {
    json spans = json::array();
    for (const auto &row : t.cell_spans) {
      json r = json::array();
      for (const CellSpan &s : row) r.push_back(json::array({s.rowspan, s.colspan}));
      spans.push_back(r);
    }
    j["cell_spans"] = spans;
  }
  if (!t.emphasis.empty()) {
    json emph = json::array();
    for (const auto &row : t.emphasis) {
      json r = json::array();
      for (const CellEmphasis &e : row)
        r.push_back(json{{"is_th", e.is_th}, {"is_bold", e.is_bold}});
      emph.push_back(r);
    }
    j["emphasis"] = emph;
  }
}

void from_json(const json &j, TableGrid &t) {
  t.doc_id = j.value("doc_id", "");
  t.ordinal = j.value("ordinal", 0);
  t.rows = j.at("rows").get<std::vector<std::vector<std::string>>>();
  t.cell_spans.clear();
  t.emphasis.clear();
  if (j.contains("cell_spans")) {
    for (const json &row : j["cell_spans"]) {
      std::vector<CellSpan> r;
      for (const json &s : row) {
        CellSpan span{s.at(0).get<int>(), s.at(1).get<int>()};
        if (span.rowspan < 1 || span.colspan < 1) {
          throw Error(ErrorCode::kInvalidValue, "cell span must be >= 1");
        }
        r.push_back(span);
      }
      t.cell_spans.push_back(std::move(r));
    }
  }
  if (j.contains("emphasis")) {
    for (const json &row : j["emphasis"]) {
      std::vector<CellEmphasis> r;
      for (const json &e : row)
        r.push_back(CellEmphasis{e.value("is_th", false), e.value("is_bold", false)});
      t.emphasis.push_back(std::move(r));
    }
  }
}

// ---------------------------------------------------------------------------
// PDF sidecar

void to_json(json &j, const PdfBlock &b) {
  j = json{{"text", b.text},
           {"page", b.page},
           {"x", b.x},
           {"y", b.y},
           {"font_size", b.font_size},
           {"direction", b.direction == TextDirection::kLtr ? "LTR" : "TTB"}};
}

void from_json(const json &j, PdfBlock &b) {
  b.text = j.at("text").get<std::string>();
  b.page = j.at("page").get<int>();
  b.x = j.at("x").get<double>();
  b.y = j.at("y").get<double>();
  b.font_size = j.at("font_size").get<double>();
  std::string dir = j.value("direction", "LTR");
  if (dir == "LTR") {
    b.direction = TextDirection::kLtr;
  } else if (dir == "TTB") {
    b.direction = TextDirection::kTtb;
  } else {
    throw Error(ErrorCode::kUnknownEnumValue, "unknown direction: " + dir);
  }
}

PdfSidecar parse_pdf_sidecar(std::string_view jsonl) {
  std::istringstream in{std::string(jsonl)};
  PdfSidecar sidecar;
  try {
    for (const json &j : read_jsonl(in)) sidecar.blocks.push_back(j.get<PdfBlock>());
  } catch (const json::exception &e) {
    throw Error(ErrorCode::kInvalidValue, std::string("sidecar: ") + e.what());
  }
  return sidecar;
}

namespace {

std::string strip_digits(std::string_view text) {
  std::string out;
  for (char c : text) {
    if (!std::isdigit(static_cast<unsigned char>(c)) && !is_space(c))
      out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  return out;
}

long rounded(double v) { return std::lround(v); }
long rounded_tenths(double v) { return std::lround(v * 10); }

}  // namespace

std::vector<Sentence> ingest_pdf_sidecar(const PdfSidecar &sidecar,
                                         const std::string &doc_id,
                                         const SidecarOptions &options) {
  if (sidecar.blocks.empty()) {
    throw Error(ErrorCode::kEmptySidecar, "sidecar has no text blocks");
  }
  for (const PdfBlock &b : sidecar.blocks) {
    if (b.page < 1) throw Error(ErrorCode::kInvalidValue, "page must be >= 1");
    if (!(b.font_size > 0))
      throw Error(ErrorCode::kInvalidValue, "font_size must be > 0");
  }

  std::set<int> pages;
  std::vector<double> sizes;
  for (const PdfBlock &b : sidecar.blocks) {
    pages.insert(b.page);
    sizes.push_back(b.font_size);
  }
  std::sort(sizes.begin(), sizes.end());
  double median = sizes.size() % 2 == 1
                      ? sizes[sizes.size() / 2]
                      : (sizes[sizes.size() / 2 - 1] + sizes[sizes.size() / 2]) / 2;

  using RepeatKey = std::tuple<long, long, std::string>;
  std::map<RepeatKey, std::set<int>> repeats;
  for (const PdfBlock &b : sidecar.blocks) {
    repeats[{rounded(b.y), rounded_tenths(b.font_size), strip_digits(b.text)}]
        .insert(b.page);
  }
  const double page_count = static_cast<double>(pages.size());
  auto is_running = [&](const PdfBlock &b) {
    if (pages.size() < 2) return false;
    const auto &seen = repeats.at(
        {rounded(b.y), rounded_tenths(b.font_size), strip_digits(b.text)});
    return static_cast<double>(seen.size()) >=
           options.repeat_fraction * page_count - 1e-9;
  };

  std::vector<PdfBlock> body;
  for (const PdfBlock &b : sidecar.blocks) {
    if (is_running(b)) continue;
    if (b.font_size < options.small_font_ratio * median) continue;
    body.push_back(b);
  }
  // Total order over block content, so permuting blocks that share a
  // position cannot change the output.
  std::sort(body.begin(), body.end(), [](const PdfBlock &a, const PdfBlock &b) {
    bool a_ttb = a.direction == TextDirection::kTtb;
    bool b_ttb = b.direction == TextDirection::kTtb;
    if (a.page != b.page) return a.page < b.page;
    if (a_ttb != b_ttb) return b_ttb;
    if (a_ttb) {
      return std::tie(a.x, a.y, a.text, a.font_size) <
             std::tie(b.x, b.y, b.text, b.font_size);
    }
    return std::tie(a.y, a.x, a.text, a.font_size) <
           std::tie(b.y, b.x, b.text, b.font_size);
  });

  std::vector<Sentence> out;
  std::string run;
  long run_size = -1;
  auto flush = [&] {
    auto sentences = make_sentences(run, doc_id, static_cast<int>(out.size()));
    for (Sentence &s : sentences) out.push_back(std::move(s));
    run.clear();
  };
  for (const PdfBlock &b : body) {
    long size = rounded_tenths(b.font_size);
    if (size != run_size) {
      flush();
      run_size = size;
    }
    if (!run.empty()) run += ' ';
    run += b.text;
  }
  flush();
  return out;
}

}  // namespace factscout::ingest
