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

// Shared domain types. All values are immutable after construction by
// convention and safe to share across threads. Every type has a JSON
// mapping whose keys match the field names; records are persisted one
// object per line.

#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "factscout/decimal.h"
#include "factscout/error.h"
#include "json.hpp"

namespace factscout {

using json = nlohmann::json;

enum class SourceType { kHtml, kPdfText, kTable };
enum class AccessClass { kOpen, kSourceSpecific, kSubscription };
enum class EntityKind {
  kLocation,
  kOrganization,
  kDate,
  kMoney,
  kPerson,
  kPercent,
  kTime,
};

inline constexpr EntityKind kAllEntityKinds[] = {
    EntityKind::kLocation, EntityKind::kOrganization, EntityKind::kDate,
    EntityKind::kMoney,    EntityKind::kPerson,       EntityKind::kPercent,
    EntityKind::kTime,
};

// Canonical wire names ("HTML", "PDF_TEXT", ...). Parsing is exact and
// throws kUnknownSourceType / kUnknownEnumValue on anything else.
std::string_view to_string(SourceType type);
std::string_view to_string(AccessClass access);
std::string_view to_string(EntityKind kind);
SourceType parse_source_type(std::string_view name);
AccessClass parse_access_class(std::string_view name);
EntityKind parse_entity_kind(std::string_view name);

// Half-open byte range [start, end).
struct Span {
  size_t start = 0;
  size_t end = 0;

  size_t length() const { return end - start; }
  bool overlaps(const Span &other) const {
    return start < other.end && other.start < end;
  }
  friend bool operator==(const Span &, const Span &) = default;
};

struct SourceDocument {
  std::string id;
  std::string uri;
  SourceType source_type = SourceType::kHtml;
  std::string title;
  std::string retrieved_at;  // UTC, "YYYY-MM-DDTHH:MM:SSZ"
  AccessClass access_class = AccessClass::kOpen;
  std::string payload_ref;   // relative to the document store root

  friend bool operator==(const SourceDocument &,
                         const SourceDocument &) = default;
};

struct Token {
  std::string text;
  Span span;
  std::string pos;

  friend bool operator==(const Token &, const Token &) = default;
};

struct Sentence {
  std::string doc_id;
  int ordinal = 0;
  std::string text;
  std::vector<Token> tokens;

  friend bool operator==(const Sentence &, const Sentence &) = default;
};

struct Entity {
  EntityKind kind = EntityKind::kLocation;
  std::string text;
  Span span;

  friend bool operator==(const Entity &, const Entity &) = default;
};

struct SentenceRef {
  std::string doc_id;
  int ordinal = 0;

  friend bool operator==(const SentenceRef &, const SentenceRef &) = default;
  friend auto operator<=>(const SentenceRef &, const SentenceRef &) = default;
};

struct ExtractionRecord {
  SentenceRef sentence_ref;
  std::string indicator_phrase;
  Decimal value;
  std::string unit;
  // Set when the unit token was not found in the unit gazetteer and `unit`
  // holds the raw surface form.
  bool unit_flagged = false;
  std::vector<Entity> entities;
  // Byte spans into the sentence text, for highlighting.
  Span indicator_span;
  Span value_span;
  Span unit_span;

  friend bool operator==(const ExtractionRecord &,
                         const ExtractionRecord &) = default;
};

struct RelevanceScore {
  double raw = 0.0;
  double normalized = 0.0;

  friend bool operator==(const RelevanceScore &,
                         const RelevanceScore &) = default;
};

// What validate_document needs to know about the repository it is
// validating against.
struct DocumentContext {
  std::function<bool(const std::string &id)> id_exists;
  std::function<bool(const std::string &payload_ref)> payload_exists;
};

// Throws Error on the first violated invariant: kMissingField for empty id,
// uri or payload_ref; kInvalidValue for a malformed timestamp;
// kUnknownSourceType / kUnknownEnumValue for out-of-range enums;
// kDuplicateId; kMissingPayload.
void validate_document(const SourceDocument &doc, const DocumentContext &ctx);

bool is_utc_timestamp(std::string_view text);

// Token spans ordered, non-overlapping, non-empty, matching the text, and
// only whitespace between them. Throws kInvalidValue.
void validate_sentence(const Sentence &sentence);

// Ordinals strictly increasing per document. Throws kInvalidValue.
void validate_sentence_order(const std::vector<Sentence> &sentences);

// ExtractionRecord invariants; the sentence lookup resolves sentence_ref.
void validate_record(
    const ExtractionRecord &record,
    const std::function<bool(const SentenceRef &)> &sentence_exists);

void to_json(json &j, const Span &s);
void from_json(const json &j, Span &s);
void to_json(json &j, const SourceDocument &d);
void from_json(const json &j, SourceDocument &d);
void to_json(json &j, const Token &t);
void from_json(const json &j, Token &t);
void to_json(json &j, const Sentence &s);
void from_json(const json &j, Sentence &s);
void to_json(json &j, const Entity &e);
void from_json(const json &j, Entity &e);
void to_json(json &j, const SentenceRef &r);
void from_json(const json &j, SentenceRef &r);
void to_json(json &j, const ExtractionRecord &r);
void from_json(const json &j, ExtractionRecord &r);
void to_json(json &j, const RelevanceScore &r);
void from_json(const json &j, RelevanceScore &r);

// JSON-lines helpers. read_jsonl skips blank lines and throws
// kInvalidValue with the 1-based line number on a malformed line.
std::vector<json> read_jsonl(std::istream &in);
std::vector<json> read_jsonl_file(const std::string &path);
void write_jsonl_line(std::ostream &out, const json &value);

template <typename T>
std::vector<T> read_records(const std::string &path) {
  std::vector<T> out;
  for (const json &j : read_jsonl_file(path)) out.push_back(j.get<T>());
  return out;
}

}  // namespace factscout
