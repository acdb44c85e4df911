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

// Turns raw sources into sentences and table grids. Everything here is a
// pure function of its input.

#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "factscout/docmodel.h"

namespace factscout::ingest {

// Splits at sentence-final punctuation followed by whitespace, except after
// guarded abbreviations ("Approx.", "e.g."), single-letter initials, or
// when the next word starts lower-case. Returned spans cover every
// non-whitespace byte; the gaps between them are whitespace only.
std::vector<Span> segment_sentence_spans(std::string_view text);
std::vector<std::string> segment_sentences(std::string_view text);

struct CellSpan {
  int rowspan = 1;
  int colspan = 1;
  friend bool operator==(const CellSpan &, const CellSpan &) = default;
};

struct CellEmphasis {
  bool is_th = false;
  bool is_bold = false;
  friend bool operator==(const CellEmphasis &, const CellEmphasis &) = default;
};

// Raw table as found in the source: rows may be ragged, cell_spans and
// emphasis are either empty or parallel to rows.
struct TableGrid {
  std::string doc_id;
  int ordinal = 0;  // table index within its document
  std::vector<std::vector<std::string>> rows;
  std::vector<std::vector<CellSpan>> cell_spans;
  std::vector<std::vector<CellEmphasis>> emphasis;

  size_t row_count() const { return rows.size(); }
  friend bool operator==(const TableGrid &, const TableGrid &) = default;
};

void to_json(json &j, const TableGrid &t);
void from_json(const json &j, TableGrid &t);

struct ParsedHtml {
  std::string title;
  std::vector<Sentence> sentences;
  std::vector<TableGrid> tables;
  std::vector<std::string> links;
};

// Harvests p, h1-h6 and li text as tokenized sentences, each <table> as a
// TableGrid (th flags, bold cells, rowspan/colspan kept) and every
// <a href>. Script, style and comments are dropped. Recovers from unclosed
// or stray tags; throws kMalformedMarkup only for input that is not text
// (NUL bytes or mostly invalid UTF-8).
ParsedHtml parse_html(std::string_view payload, const std::string &doc_id);

enum class TextDirection { kLtr, kTtb };

struct PdfBlock {
  std::string text;
  int page = 1;
  double x = 0;
  double y = 0;  // points from the top of the page
  double font_size = 10;
  TextDirection direction = TextDirection::kLtr;
};

struct PdfSidecar {
  std::vector<PdfBlock> blocks;
};

// One block per line: {"text", "page", "x", "y", "font_size", "direction"}.
PdfSidecar parse_pdf_sidecar(std::string_view jsonl);
void to_json(json &j, const PdfBlock &b);
void from_json(const json &j, PdfBlock &b);

struct SidecarOptions {
  // A block whose rounded (y, font size) and digit-stripped text recur on at
  // least this fraction of pages is a running header or footer.
  double repeat_fraction = 0.8;
  // Blocks smaller than this fraction of the median font size are dropped.
  double small_font_ratio = 0.7;
};

// Drops running headers/footers and small print, orders the remaining
// blocks by (page, y, x) with top-to-bottom blocks after a page's
// left-to-right text, and segments runs of equal font size into
// sentences. Throws kEmptySidecar, or kInvalidValue for a block with
// page < 1 or font_size <= 0.
std::vector<Sentence> ingest_pdf_sidecar(const PdfSidecar &sidecar,
                                         const std::string &doc_id,
                                         const SidecarOptions &options = {});

// Sentences for a block of plain text, numbered from `first_ordinal`.
std::vector<Sentence> make_sentences(std::string_view text,
                                     const std::string &doc_id,
                                     int first_ordinal);

}  // namespace factscout::ingest
