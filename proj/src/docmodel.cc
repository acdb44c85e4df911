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

#include "factscout/docmodel.h"

#include <cctype>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>

namespace factscout {

const char *error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kMissingField: return "MissingField";
    case ErrorCode::kDuplicateId: return "DuplicateId";
    case ErrorCode::kUnknownSourceType: return "UnknownSourceType";
    case ErrorCode::kUnknownEnumValue: return "UnknownEnumValue";
    case ErrorCode::kMissingPayload: return "MissingPayload";
    case ErrorCode::kInvalidValue: return "InvalidValue";
    case ErrorCode::kMalformedMarkup: return "MalformedMarkup";
    case ErrorCode::kEmptySidecar: return "EmptySidecar";
    case ErrorCode::kEmptyGrid: return "EmptyGrid";
    case ErrorCode::kEmptyTrainingSet: return "EmptyTrainingSet";
    case ErrorCode::kNoDataRows: return "NoDataRows";
    case ErrorCode::kLabelMismatch: return "LabelMismatch";
    case ErrorCode::kNotANumber: return "NotANumber";
    case ErrorCode::kInvalidGrammar: return "InvalidGrammar";
    case ErrorCode::kDuplicateUnitId: return "DuplicateUnitId";
    case ErrorCode::kUnknownSourceFilter: return "UnknownSourceFilter";
    case ErrorCode::kCorruptSnapshot: return "CorruptSnapshot";
    case ErrorCode::kIoFailure: return "IoFailure";
    case ErrorCode::kIndexNotEmpty: return "IndexNotEmpty";
    case ErrorCode::kBlankIndicator: return "BlankIndicator";
    case ErrorCode::kOutOfRange: return "OutOfRange";
    case ErrorCode::kEmptyLedger: return "EmptyLedger";
    case ErrorCode::kRepositoryVersion: return "RepositoryVersion";
    case ErrorCode::kNotFound: return "NotFound";
    case ErrorCode::kBadRequest: return "BadRequest";
  }
  return "Unknown";
}

std::string_view to_string(SourceType type) {
  switch (type) {
    case SourceType::kHtml: return "HTML";
    case SourceType::kPdfText: return "PDF_TEXT";
    case SourceType::kTable: return "TABLE";
  }
  throw Error(ErrorCode::kUnknownSourceType, "unknown source type");
}

std::string_view to_string(AccessClass access) {
  switch (access) {
    case AccessClass::kOpen: return "OPEN";
    case AccessClass::kSourceSpecific: return "SOURCE_SPECIFIC";
    case AccessClass::kSubscription: return "SUBSCRIPTION";
  }
  throw Error(ErrorCode::kUnknownEnumValue, "unknown access class");
}

std::string_view to_string(EntityKind kind) {
  switch (kind) {
    case EntityKind::kLocation: return "LOCATION";
    case EntityKind::kOrganization: return "ORGANIZATION";
    case EntityKind::kDate: return "DATE";
    case EntityKind::kMoney: return "MONEY";
    case EntityKind::kPerson: return "PERSON";
    case EntityKind::kPercent: return "PERCENT";
    case EntityKind::kTime: return "TIME";
  }
  throw Error(ErrorCode::kUnknownEnumValue, "unknown entity kind");
}

SourceType parse_source_type(std::string_view name) {
  if (name == "HTML") return SourceType::kHtml;
  if (name == "PDF_TEXT") return SourceType::kPdfText;
  if (name == "TABLE") return SourceType::kTable;
  throw Error(ErrorCode::kUnknownSourceType,
              "unknown source type: " + std::string(name));
}

AccessClass parse_access_class(std::string_view name) {
  if (name == "OPEN") return AccessClass::kOpen;
  if (name == "SOURCE_SPECIFIC") return AccessClass::kSourceSpecific;
  if (name == "SUBSCRIPTION") return AccessClass::kSubscription;
  throw Error(ErrorCode::kUnknownEnumValue,
              "unknown access class: " + std::string(name));
}

EntityKind parse_entity_kind(std::string_view name) {
  for (EntityKind kind : kAllEntityKinds) {
    if (to_string(kind) == name) return kind;
  }
  throw Error(ErrorCode::kUnknownEnumValue,
              "unknown entity kind: " + std::string(name));
}

bool is_utc_timestamp(std::string_view t) {
  // YYYY-MM-DDTHH:MM:SSZ
  static constexpr std::string_view kShape = "dddd-dd-ddTdd:dd:ddZ";
  if (t.size() != kShape.size()) return false;
  for (size_t i = 0; i < t.size(); ++i) {
    if (kShape[i] == 'd') {
      if (!std::isdigit(static_cast<unsigned char>(t[i]))) return false;
    } else if (t[i] != kShape[i]) {
      return false;
    }
  }
  auto num = [&](size_t pos, size_t len) {
    return std::stoi(std::string(t.substr(pos, len)));
  };
  int month = num(5, 2), day = num(8, 2);
  int hour = num(11, 2), minute = num(14, 2), second = num(17, 2);
  return month >= 1 && month <= 12 && day >= 1 && day <= 31 && hour < 24 &&
         minute < 60 && second < 61;
}

void validate_document(const SourceDocument &doc, const DocumentContext &ctx) {
  if (doc.id.empty()) {
    throw Error(ErrorCode::kMissingField, "document id is empty");
  }
  if (doc.uri.empty()) {
    throw Error(ErrorCode::kMissingField, "document uri is empty");
  }
  // Round-trips through the name table reject values outside the enums.
  parse_source_type(to_string(doc.source_type));
  parse_access_class(to_string(doc.access_class));
  if (!doc.retrieved_at.empty() && !is_utc_timestamp(doc.retrieved_at)) {
    throw Error(ErrorCode::kInvalidValue,
                "retrieved_at is not a UTC timestamp: " + doc.retrieved_at);
  }
  if (ctx.id_exists && ctx.id_exists(doc.id)) {
    throw Error(ErrorCode::kDuplicateId, "duplicate document id: " + doc.id);
  }
  if (doc.payload_ref.empty()) {
    throw Error(ErrorCode::kMissingField, "payload_ref is empty");
  }
  if (ctx.payload_exists && !ctx.payload_exists(doc.payload_ref)) {
    throw Error(ErrorCode::kMissingPayload,
                "payload not in store: " + doc.payload_ref);
  }
}

namespace {

bool all_space(std::string_view s) {
  for (char c : s) {
    if (!std::isspace(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

}  // namespace

void validate_sentence(const Sentence &sentence) {
  const std::string &text = sentence.text;
  size_t cursor = 0;
  for (const Token &tok : sentence.tokens) {
    if (tok.span.end <= tok.span.start || tok.span.start < cursor ||
        tok.span.end > text.size()) {
      throw Error(ErrorCode::kInvalidValue,
                  "token span out of order: " + tok.text);
    }
    if (text.compare(tok.span.start, tok.span.length(), tok.text) != 0) {
      throw Error(ErrorCode::kInvalidValue,
                  "token text does not match span: " + tok.text);
    }
    if (!all_space(std::string_view(text).substr(cursor,
                                                 tok.span.start - cursor))) {
      throw Error(ErrorCode::kInvalidValue, "text not covered by tokens");
    }
    cursor = tok.span.end;
  }
  if (!all_space(std::string_view(text).substr(cursor))) {
    throw Error(ErrorCode::kInvalidValue, "text not covered by tokens");
  }
}

void validate_sentence_order(const std::vector<Sentence> &sentences) {
  std::map<std::string, int> last;
  for (const Sentence &s : sentences) {
    auto it = last.find(s.doc_id);
    if (s.ordinal < 0 || (it != last.end() && s.ordinal <= it->second)) {
      throw Error(ErrorCode::kInvalidValue,
                  "sentence ordinals not increasing in " + s.doc_id);
    }
    last[s.doc_id] = s.ordinal;
  }
}

void validate_record(
    const ExtractionRecord &record,
    const std::function<bool(const SentenceRef &)> &sentence_exists) {
  if (record.indicator_phrase.empty()) {
    throw Error(ErrorCode::kMissingField, "indicator phrase is empty");
  }
  if (!std::isfinite(record.value.to_double())) {
    throw Error(ErrorCode::kInvalidValue, "value is not finite");
  }
  if (record.unit.empty()) {
    throw Error(ErrorCode::kMissingField, "unit is empty");
  }
  if (sentence_exists && !sentence_exists(record.sentence_ref)) {
    throw Error(ErrorCode::kNotFound,
                "sentence_ref does not resolve: " + record.sentence_ref.doc_id +
                    "#" + std::to_string(record.sentence_ref.ordinal));
  }
}

// ---------------------------------------------------------------------------
// JSON mapping.

void to_json(json &j, const Span &s) { j = json::array({s.start, s.end}); }

void from_json(const json &j, Span &s) {
  if (!j.is_array() || j.size() != 2) {
    throw Error(ErrorCode::kInvalidValue, "span must be [start, end]");
  }
  s.start = j[0].get<size_t>();
  s.end = j[1].get<size_t>();
}

void to_json(json &j, const SourceDocument &d) {
  j = json{{"id", d.id},
           {"uri", d.uri},
           {"source_type", to_string(d.source_type)},
           {"title", d.title},
           {"retrieved_at", d.retrieved_at},
           {"access_class", to_string(d.access_class)},
           {"payload_ref", d.payload_ref}};
}

void from_json(const json &j, SourceDocument &d) {
  d.id = j.at("id").get<std::string>();
  d.uri = j.at("uri").get<std::string>();
  d.source_type = parse_source_type(j.at("source_type").get<std::string>());
  d.title = j.value("title", "");
  d.retrieved_at = j.value("retrieved_at", "");
  d.access_class = j.contains("access_class")
                       ? parse_access_class(j["access_class"].get<std::string>())
                       : AccessClass::kOpen;
  d.payload_ref = j.at("payload_ref").get<std::string>();
}

void to_json(json &j, const Token &t) {
  j = json{{"text", t.text}, {"span", t.span}, {"pos", t.pos}};
}

void from_json(const json &j, Token &t) {
  t.text = j.at("text").get<std::string>();
  t.span = j.at("span").get<Span>();
  t.pos = j.value("pos", "");
}

void to_json(json &j, const Sentence &s) {
  j = json{{"doc_id", s.doc_id},
           {"ordinal", s.ordinal},
           {"text", s.text},
           {"tokens", s.tokens}};
}

void from_json(const json &j, Sentence &s) {
  s.doc_id = j.at("doc_id").get<std::string>();
  s.ordinal = j.at("ordinal").get<int>();
  s.text = j.at("text").get<std::string>();
  s.tokens = j.value("tokens", std::vector<Token>{});
}

void to_json(json &j, const Entity &e) {
  j = json{{"kind", to_string(e.kind)}, {"text", e.text}, {"span", e.span}};
}

void from_json(const json &j, Entity &e) {
  e.kind = parse_entity_kind(j.at("kind").get<std::string>());
  e.text = j.at("text").get<std::string>();
  e.span = j.at("span").get<Span>();
}

void to_json(json &j, const SentenceRef &r) {
  j = json{{"doc_id", r.doc_id}, {"ordinal", r.ordinal}};
}

void from_json(const json &j, SentenceRef &r) {
  r.doc_id = j.at("doc_id").get<std::string>();
  r.ordinal = j.at("ordinal").get<int>();
}

void to_json(json &j, const ExtractionRecord &r) {
  j = json{{"sentence_ref", r.sentence_ref},
           {"indicator_phrase", r.indicator_phrase},
           {"value", r.value.to_string()},
           {"unit", r.unit},
           {"unit_flagged", r.unit_flagged},
           {"entities", r.entities},
           {"indicator_span", r.indicator_span},
           {"value_span", r.value_span},
           {"unit_span", r.unit_span}};
}

void from_json(const json &j, ExtractionRecord &r) {
  r.sentence_ref = j.at("sentence_ref").get<SentenceRef>();
  r.indicator_phrase = j.at("indicator_phrase").get<std::string>();
  auto value = Decimal::parse(j.at("value").get<std::string>());
  if (!value) throw Error(ErrorCode::kNotANumber, "record value");
  r.value = *value;
  r.unit = j.at("unit").get<std::string>();
  r.unit_flagged = j.value("unit_flagged", false);
  r.entities = j.value("entities", std::vector<Entity>{});
  r.indicator_span = j.value("indicator_span", Span{});
  r.value_span = j.value("value_span", Span{});
  r.unit_span = j.value("unit_span", Span{});
}

void to_json(json &j, const RelevanceScore &r) {
  j = json{{"raw", r.raw}, {"normalized", r.normalized}};
}

void from_json(const json &j, RelevanceScore &r) {
  r.raw = j.at("raw").get<double>();
  r.normalized = j.at("normalized").get<double>();
}

std::vector<json> read_jsonl(std::istream &in) {
  std::vector<json> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (all_space(line)) continue;
    try {
      out.push_back(json::parse(line));
    } catch (const json::exception &e) {
      throw Error(ErrorCode::kInvalidValue,
                  "line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

std::vector<json> read_jsonl_file(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoFailure, "cannot open " + path);
  return read_jsonl(in);
}

void write_jsonl_line(std::ostream &out, const json &value) {
  out << value.dump() << '\n';
}

}  // namespace factscout
