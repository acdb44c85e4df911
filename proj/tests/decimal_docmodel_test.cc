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

#include <random>
#include <sstream>

#include "factscout/decimal.h"
#include "factscout/docmodel.h"
#include "test_util.h"

namespace factscout {
namespace {

TEST(DecimalTest, ParsesAndRendersCanonically) {
  EXPECT_EQ(Decimal::parse("1518")->to_string(), "1518");
  EXPECT_EQ(Decimal::parse("2.30")->to_string(), "2.3");
  EXPECT_EQ(Decimal::parse("-0.050")->to_string(), "-0.05");
  EXPECT_EQ(Decimal::parse("0")->to_string(), "0");
  EXPECT_EQ(Decimal::parse("007")->to_string(), "7");
  EXPECT_FALSE(Decimal::parse("1,518").has_value());
  EXPECT_FALSE(Decimal::parse("1e5").has_value());
  EXPECT_FALSE(Decimal::parse("").has_value());
  EXPECT_FALSE(Decimal::parse(".").has_value());
}

TEST(DecimalTest, EqualValuesCompareEqual) {
  EXPECT_EQ(*Decimal::parse("2.30"), *Decimal::parse("2.3"));
  EXPECT_EQ(Decimal::parse("2.3")->shifted(6), *Decimal::parse("2300000"));
}

TEST(DecimalTest, ShiftOverflowIsOutOfRange) {
  Decimal big = *Decimal::parse("9223372036854775");
  EXPECT_ERROR_CODE(big.shifted(9), ErrorCode::kOutOfRange);
}

// Render then parse is the identity on random decimals.
TEST(DecimalTest, RoundTripProperty) {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int64_t> mant(-1'000'000'000'000LL, 1'000'000'000'000LL);
  std::uniform_int_distribution<int> scale(0, 8);
  for (int i = 0; i < 2000; ++i) {
    Decimal d = Decimal::from_parts(mant(rng), scale(rng));
    auto back = Decimal::parse(d.to_string());
    ASSERT_TRUE(back.has_value()) << d.to_string();
    EXPECT_EQ(*back, d);
    EXPECT_EQ(back->to_string(), d.to_string());
  }
}

SourceDocument html_doc() {
  SourceDocument d;
  d.id = "D1";
  d.uri = "https://example.org/a";
  d.source_type = SourceType::kHtml;
  d.title = "A";
  d.retrieved_at = "2019-05-01T00:00:00Z";
  d.payload_ref = "payloads/D1.html";
  return d;
}

DocumentContext context(bool exists, bool payload) {
  DocumentContext ctx;
  ctx.id_exists = [exists](const std::string &) { return exists; };
  ctx.payload_exists = [payload](const std::string &) { return payload; };
  return ctx;
}

TEST(DocModelTest, ValidatesDocuments) {
  EXPECT_NO_THROW(validate_document(html_doc(), context(false, true)));

  SourceDocument d = html_doc();
  d.id.clear();
  EXPECT_ERROR_CODE(validate_document(d, context(false, true)), ErrorCode::kMissingField);
  EXPECT_ERROR_CODE(validate_document(html_doc(), context(true, true)),
                    ErrorCode::kDuplicateId);
  EXPECT_ERROR_CODE(validate_document(html_doc(), context(false, false)),
                    ErrorCode::kMissingPayload);
  d = html_doc();
  d.retrieved_at = "yesterday";
  EXPECT_ERROR_CODE(validate_document(d, context(false, true)), ErrorCode::kInvalidValue);
}

TEST(DocModelTest, EnumNamesAreClosed) {
  EXPECT_EQ(parse_source_type("PDF_TEXT"), SourceType::kPdfText);
  EXPECT_EQ(parse_access_class("SUBSCRIPTION"), AccessClass::kSubscription);
  EXPECT_ERROR_CODE(parse_source_type("DOCX"), ErrorCode::kUnknownSourceType);
  EXPECT_ERROR_CODE(parse_access_class("PRIVATE"), ErrorCode::kUnknownEnumValue);
  EXPECT_ERROR_CODE(parse_entity_kind("EVENT"), ErrorCode::kUnknownEnumValue);
  for (EntityKind k : kAllEntityKinds) EXPECT_EQ(parse_entity_kind(to_string(k)), k);
}

TEST(DocModelTest, AccessClassDefaultsToOpen) {
  json j = json(html_doc());
  j.erase("access_class");
  EXPECT_EQ(j.get<SourceDocument>().access_class, AccessClass::kOpen);
}

TEST(DocModelTest, SentenceValidation) {
  Sentence s;
  s.doc_id = "D1";
  s.text = "Cotton  rose.";
  s.tokens = {{"Cotton", {0, 6}, "NN"}, {"rose", {8, 12}, "VBD"}, {".", {12, 13}, "."}};
  EXPECT_NO_THROW(validate_sentence(s));
  s.tokens[1].span = {7, 12};  // "rose" does not start at 7
  EXPECT_ERROR_CODE(validate_sentence(s), ErrorCode::kInvalidValue);
  s.tokens[1].span = {8, 12};
  s.tokens.pop_back();  // trailing "." not covered
  EXPECT_ERROR_CODE(validate_sentence(s), ErrorCode::kInvalidValue);

  Sentence a = s, b = s;
  a.ordinal = 1;
  b.ordinal = 1;
  EXPECT_ERROR_CODE(validate_sentence_order({a, b}), ErrorCode::kInvalidValue);
}

TEST(DocModelTest, RecordValidation) {
  ExtractionRecord r;
  r.sentence_ref = {"D1", 0};
  r.indicator_phrase = "planted per participant";
  r.value = *Decimal::parse("1518");
  r.unit = "hectares";
  auto found = [](const SentenceRef &) { return true; };
  auto missing = [](const SentenceRef &) { return false; };
  EXPECT_NO_THROW(validate_record(r, found));
  EXPECT_ANY_THROW(validate_record(r, missing));
  r.indicator_phrase.clear();
  EXPECT_ANY_THROW(validate_record(r, found));
}

// Every domain type survives a JSON round trip unchanged.
TEST(DocModelTest, SerializationRoundTrip) {
  SourceDocument d = html_doc();
  d.access_class = AccessClass::kSourceSpecific;
  EXPECT_EQ(json(d).get<SourceDocument>(), d);

  Sentence s;
  s.doc_id = "D1";
  s.ordinal = 4;
  s.text = "Exports \xC3\xA9t\xC3\xA9 1,518 ha.";
  s.tokens = {{"Exports", {0, 7}, "NNS"}};
  EXPECT_EQ(json(s).get<Sentence>(), s);

  ExtractionRecord r;
  r.sentence_ref = {"D1", 4};
  r.indicator_phrase = "Exports";
  r.value = *Decimal::parse("1518");
  r.unit = "ha";
  r.unit_flagged = true;
  r.entities = {{EntityKind::kPercent, "63%", {2, 5}}};
  r.indicator_span = {0, 7};
  r.value_span = {17, 22};
  r.unit_span = {23, 25};
  json j = r;
  EXPECT_TRUE(j.at("value").is_string());
  EXPECT_EQ(j.get<ExtractionRecord>(), r);

  RelevanceScore score{13.35, 0.59};
  EXPECT_EQ(json(score).get<RelevanceScore>(), score);
}

TEST(DocModelTest, JsonLinesReportLineNumbers) {
  std::istringstream ok("{\"a\":1}\n\n{\"a\":2}\n");
  EXPECT_EQ(read_jsonl(ok).size(), 2u);
  std::istringstream bad("{\"a\":1}\n{oops\n");
  try {
    read_jsonl(bad);
    FAIL() << "expected an error";
  } catch (const Error &e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidValue);
    EXPECT_NE(std::string(e.what()).find("2"), std::string::npos);
  }
}

}  // namespace
}  // namespace factscout
