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
#include <cmath>
#include <map>
#include <random>

#include "factscout/ingest.h"
#include "factscout/repository.h"
#include "test_util.h"

namespace factscout::ingest {
namespace {

using Strings = std::vector<std::string>;

TEST(SegmentTest, Basics) {
  EXPECT_EQ(segment_sentences("A rose. A bale."), (Strings{"A rose.", "A bale."}));
  EXPECT_EQ(segment_sentences("Approx. 1,518 ha planted."), (Strings{"Approx. 1,518 ha planted."}));
  EXPECT_TRUE(segment_sentences("").empty());
  EXPECT_EQ(segment_sentences("Yield was 2.3 t/ha. Area fell!  Why? e.g. this."),
            (Strings{"Yield was 2.3 t/ha.", "Area fell!", "Why? e.g. this."}));
}

// Spans cover every non-whitespace byte, and only whitespace lies between.
TEST(SegmentTest, SpansPartitionNonWhitespace) {
  std::mt19937 rng(11);
  const Strings pieces = {"Cotton", "rose", "2.3", "e.g.", "Approx.", ".", "!", "?",
                          " ", "  ", "\n", "A.", "ha", "Mr.", "1,518"};
  for (int i = 0; i < 500; ++i) {
    std::string text;
    int n = std::uniform_int_distribution<int>(0, 20)(rng);
    for (int k = 0; k < n; ++k) {
      text += pieces[std::uniform_int_distribution<size_t>(0, pieces.size() - 1)(rng)];
      if (k % 2) text += ' ';
    }
    std::vector<Span> spans = segment_sentence_spans(text);
    size_t pos = 0;
    for (const Span &s : spans) {
      ASSERT_LE(pos, s.start);
      for (size_t c = pos; c < s.start; ++c) ASSERT_TRUE(std::isspace(static_cast<unsigned char>(text[c]))) << text;
      ASSERT_LT(s.start, s.end);
      pos = s.end;
    }
    for (size_t c = pos; c < text.size(); ++c) ASSERT_TRUE(std::isspace(static_cast<unsigned char>(text[c]))) << text;
  }
}

PdfBlock block(std::string text, int page, double y, double font = 11, double x = 72) {
  PdfBlock b;
  b.text = std::move(text);
  b.page = page;
  b.y = y;
  b.x = x;
  b.font_size = font;
  return b;
}

TEST(PdfSidecarTest, HectaresSentenceVerbatim) {
  PdfSidecar sc;
  sc.blocks = {block(
      "The average hectares planted per participant increased slightly 1,518 hectares.", 1,
      100)};
  std::vector<Sentence> out = ingest_pdf_sidecar(sc, "D");
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out[0].text,
            "The average hectares planted per participant increased slightly 1,518 hectares.");
}

TEST(PdfSidecarTest, EmptyAndInvalid) {
  EXPECT_ERROR_CODE(ingest_pdf_sidecar(PdfSidecar{}, "D"), ErrorCode::kEmptySidecar);
  PdfSidecar sc;
  sc.blocks = {block("x", 0, 10)};
  EXPECT_ERROR_CODE(ingest_pdf_sidecar(sc, "D"), ErrorCode::kInvalidValue);
  EXPECT_ERROR_CODE(ingest_pdf_sidecar(parse_pdf_sidecar(""), "D"), ErrorCode::kEmptySidecar);
}

TEST(PdfSidecarTest, ParsesJsonLines) {
  PdfSidecar sc = parse_pdf_sidecar(
      "{\"text\":\"Hello there.\",\"page\":2,\"x\":1,\"y\":2,\"font_size\":11,\"direction\":\"TTB\"}\n");
  ASSERT_EQ(sc.blocks.size(), 1u);
  EXPECT_EQ(sc.blocks[0].page, 2);
  EXPECT_EQ(sc.blocks[0].direction, TextDirection::kTtb);
}

// Oracle for running headers: a (rounded y, rounded font, digit-free text)
// key present on at least 80% of pages is removed, and nothing else is.
TEST(PdfSidecarTest, RunningHeadersMatchRepetitionOracle) {
  std::mt19937 rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    int pages = std::uniform_int_distribution<int>(2, 8)(rng);
    PdfSidecar sc;
    std::map<int, int> header_pages;  // candidate header id -> pages carrying it
    for (int p = 1; p <= pages; ++p) {
      for (int h = 0; h < 3; ++h) {
        if (std::uniform_int_distribution<int>(0, 9)(rng) < 7) {
          sc.blocks.push_back(block("Annual Report " + std::to_string(h) + "a.", p, 20 + h, 11));
          ++header_pages[h];
        }
      }
      sc.blocks.push_back(block("Body text on page " + std::to_string(p) + " is unique" +
                                    std::string(static_cast<size_t>(p), 'x') + ".",
                                p, 300, 11));
    }
    // Digits are stripped from the key, so "Annual Report 0a" and
    // "Annual Report 1a" differ only through y. Count expected survivors.
    size_t expected_headers = 0;
    for (auto [h, count] : header_pages) {
      if (count < 0.8 * pages) expected_headers += static_cast<size_t>(count);
    }
    std::vector<Sentence> out = ingest_pdf_sidecar(sc, "D");
    size_t headers = 0, bodies = 0;
    for (const Sentence &s : out) {
      if (s.text.rfind("Annual Report", 0) == 0) ++headers;
      if (s.text.rfind("Body text", 0) == 0) ++bodies;
    }
    EXPECT_EQ(bodies, static_cast<size_t>(pages));
    EXPECT_EQ(headers, expected_headers) << "trial " << trial;
  }
}

TEST(PdfSidecarTest, SmallPrintDropped) {
  PdfSidecar sc;
  sc.blocks = {block("Main text here.", 1, 100, 11), block("More main text.", 1, 120, 11),
               block("Tiny footnote.", 1, 700, 6)};
  std::vector<Sentence> out = ingest_pdf_sidecar(sc, "D");
  ASSERT_EQ(out.size(), 2u);
  EXPECT_EQ(out[1].text, "More main text.");
}

TEST(PdfSidecarTest, TopToBottomBlocksFollowPageText) {
  PdfSidecar sc;
  PdfBlock side = block("Side note.", 1, 50);
  side.direction = TextDirection::kTtb;
  sc.blocks = {side, block("First line.", 1, 100), block("Second line.", 1, 200)};
  std::vector<Sentence> out = ingest_pdf_sidecar(sc, "D");
  ASSERT_EQ(out.size(), 3u);
  EXPECT_EQ(out[0].text, "First line.");
  EXPECT_EQ(out[2].text, "Side note.");
}

// Output does not depend on the input order of blocks, including blocks
// that share (page, y, x).
TEST(PdfSidecarTest, PermutationInvariance) {
  std::mt19937 rng(9);
  for (int trial = 0; trial < 100; ++trial) {
    PdfSidecar sc;
    int n = std::uniform_int_distribution<int>(1, 12)(rng);
    for (int i = 0; i < n; ++i) {
      int page = std::uniform_int_distribution<int>(1, 3)(rng);
      double y = 100 + 20 * std::uniform_int_distribution<int>(0, 4)(rng);
      sc.blocks.push_back(block("Block " + std::to_string(i) + " text.", page, y));
    }
    std::vector<Sentence> base = ingest_pdf_sidecar(sc, "D");
    PdfSidecar shuffled = sc;
    std::shuffle(shuffled.blocks.begin(), shuffled.blocks.end(), rng);
    std::vector<Sentence> again = ingest_pdf_sidecar(shuffled, "D");
    ASSERT_EQ(base.size(), again.size());
    for (size_t i = 0; i < base.size(); ++i) EXPECT_EQ(base[i].text, again[i].text);
  }
}

TEST(PdfSidecarTest, EqualPositionsAreStable) {
  PdfSidecar sc;
  sc.blocks = {block("Alpha one.", 1, 100), block("Beta two.", 1, 100)};
  PdfSidecar swapped;
  swapped.blocks = {sc.blocks[1], sc.blocks[0]};
  auto texts = [](const std::vector<Sentence> &v) {
    std::vector<std::string> t;
    for (const Sentence &s : v) t.push_back(s.text);
    return t;
  };
  EXPECT_EQ(texts(ingest_pdf_sidecar(sc, "D")), texts(ingest_pdf_sidecar(swapped, "D")));
}

TEST(TableSourceTest, CsvQuoting) {
  auto rows = parse_csv("a,\"b,c\",\"d \"\"q\"\"\"\r\n1,2,3\n");
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0], (Strings{"a", "b,c", "d \"q\""}));
  EXPECT_EQ(rows[1], (Strings{"1", "2", "3"}));
}

TEST(TableSourceTest, ParseSourceTable) {
  ParsedSource csv = parse_source(SourceType::kTable, "Year,Area\n2016,1518\n", "T");
  ASSERT_EQ(csv.tables.size(), 1u);
  EXPECT_EQ(csv.tables[0].rows[1], (Strings{"2016", "1518"}));
  EXPECT_EQ(csv.tables[0].doc_id, "T");

  ParsedSource js = parse_source(
      SourceType::kTable, R"({"rows": [["Year", "Area"], ["2016", "1518"]]})", "T");
  ASSERT_EQ(js.tables.size(), 1u);
  EXPECT_EQ(js.tables[0].rows, csv.tables[0].rows);

  EXPECT_ERROR_CODE(parse_source(SourceType::kTable, "  \n", "T"), ErrorCode::kEmptyGrid);
}

}  // namespace
}  // namespace factscout::ingest
