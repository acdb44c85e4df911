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

#include <cctype>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "factscout/repository.h"

namespace factscout {

namespace {

std::string trim(std::string_view s) {
  size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::string join(const std::vector<std::string> &parts, const char *sep) {
  std::string out;
  for (const std::string &p : parts) {
    if (p.empty()) continue;
    if (!out.empty()) out += sep;
    out += p;
  }
  return out;
}

std::string default_doc_id(std::string_view uri) {
  uint64_t h = 1469598103934665603ull;  // FNV-1a
  for (unsigned char c : uri) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[24];
  std::snprintf(buf, sizeof buf, "D%08llx",
                static_cast<unsigned long long>(h & 0xffffffffull));
  return buf;
}

std::vector<std::string> entity_terms(const std::vector<Entity> &entities) {
  std::vector<std::string> out;
  for (const Entity &e : entities)
    out.push_back(std::string(to_string(e.kind)) + ":" + e.text);
  return out;
}

// First gazetteer unit mentioned in `text`, longest match at each position.
std::optional<std::string> find_unit(std::string_view text,
                                     const nlp::Gazetteer &gaz) {
  std::vector<Token> tokens = nlp::tokenize(text, gaz);
  for (size_t i = 0; i < tokens.size(); ++i) {
    std::optional<std::string> best;
    std::string phrase;
    for (size_t j = i; j < tokens.size() && j - i < gaz.max_unit_words(); ++j) {
      if (!phrase.empty()) phrase += ' ';
      phrase += nlp::lowercase(tokens[j].text);
      if (auto c = gaz.canonical_unit(phrase)) best = c;
    }
    if (best) return best;
  }
  return std::nullopt;
}

// Value of a numeric table cell: "1,518", "$2.3", "63%", "2.3 million".
std::optional<Decimal> cell_value(std::string_view raw) {
  std::string s = trim(raw);
  if (!s.empty() && s[0] == '$') s = trim(s.substr(1));
  if (!s.empty() && s.back() == '%') s = trim(s.substr(0, s.size() - 1));
  if (s.empty()) return std::nullopt;
  try {
    return nlp::normalize_value(s);
  } catch (const Error &) {
    return std::nullopt;
  }
}

}  // namespace

std::vector<std::vector<std::string>> parse_csv(std::string_view text) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false, any = false;
  for (size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
      continue;
    }
    if (c == '"') {
      quoted = true;
      any = true;
    } else if (c == ',') {
      row.push_back(std::move(field));
      field.clear();
      any = true;
    } else if (c == '\n' || c == '\r') {
      if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
      if (any || !field.empty()) {
        row.push_back(std::move(field));
        rows.push_back(std::move(row));
      }
      row.clear();
      field.clear();
      any = false;
    } else {
      field += c;
    }
  }
  if (quoted) throw Error(ErrorCode::kInvalidValue, "unterminated quoted CSV field");
  if (any || !field.empty()) {
    row.push_back(std::move(field));
    rows.push_back(std::move(row));
  }
  return rows;
}

ParsedSource parse_source(SourceType type, std::string_view payload,
                          const std::string &doc_id) {
  ParsedSource out;
  switch (type) {
    case SourceType::kHtml: {
      ingest::ParsedHtml html = ingest::parse_html(payload, doc_id);
      out.title = std::move(html.title);
      out.sentences = std::move(html.sentences);
      out.tables = std::move(html.tables);
      break;
    }
    case SourceType::kPdfText:
      out.sentences =
          ingest::ingest_pdf_sidecar(ingest::parse_pdf_sidecar(payload), doc_id);
      break;
    case SourceType::kTable: {
      ingest::TableGrid grid;
      std::string text = trim(payload);
      if (!text.empty() && text[0] == '{') {
        try {
          grid = json::parse(text).get<ingest::TableGrid>();
        } catch (const json::exception &e) {
          throw Error(ErrorCode::kInvalidValue, std::string("table: ") + e.what());
        }
      } else {
        grid.rows = parse_csv(text);
      }
      if (grid.rows.empty()) throw Error(ErrorCode::kEmptyGrid, "table has no rows");
      grid.doc_id = doc_id;
      grid.ordinal = 0;
      out.tables.push_back(std::move(grid));
      break;
    }
  }
  return out;
}

SourceDocument ingest_source(Repository &repo, const IngestRequest &request) {
  if (trim(request.uri).empty()) {
    throw Error(ErrorCode::kMissingField, "uri is required");
  }
  SourceDocument doc;
  doc.id = request.id ? *request.id : default_doc_id(request.uri);
  doc.uri = request.uri;
  doc.source_type = request.type;
  doc.access_class = request.access;
  doc.retrieved_at = request.retrieved_at;
  if (repo.find_document(doc.id)) {
    throw Error(ErrorCode::kDuplicateId, "duplicate document id: " + doc.id);
  }
  ParsedSource parsed = parse_source(request.type, request.payload, doc.id);
  doc.title = request.title ? *request.title : parsed.title;
  repo.add_document(doc, request.payload, parsed.sentences, parsed.tables);
  return *repo.find_document(doc.id);
}

ExtractionResult extract_units(const std::vector<SourceDocument> &documents,
                               const std::vector<Sentence> &sentences,
                               const std::vector<ingest::TableGrid> &tables,
                               const nlp::ChunkGrammar &grammar,
                               const nlp::Gazetteer &gaz,
                               const tablelabel::LabelerModel &model) {
  std::map<std::string, const SourceDocument *> docs;
  for (const SourceDocument &d : documents) docs[d.id] = &d;
  auto source_terms = [](const SourceDocument &d) {
    return join({d.title, d.uri}, " ");
  };

  ExtractionResult result;
  for (const Sentence &s : sentences) {
    auto doc = docs.find(s.doc_id);
    if (doc == docs.end()) continue;
    std::vector<ExtractionRecord> records = nlp::chunk_extract(s, grammar, gaz);
    for (size_t k = 0; k < records.size(); ++k) {
      const ExtractionRecord &r = records[k];
      index::IndexedUnit u;
      u.unit_id = s.doc_id + ":s" + std::to_string(s.ordinal) + ":" + std::to_string(k);
      u.doc_id = s.doc_id;
      u.source_type = doc->second->source_type;
      u.text = s.text;
      u.indicator = r.indicator_phrase;
      u.value = r.value.to_string();
      u.unit = r.unit;
      u.entities = entity_terms(r.entities);
      u.source = source_terms(*doc->second);
      u.provenance.kind = index::Provenance::kSentence;
      u.provenance.ordinal = s.ordinal;
      u.provenance.indicator_span = r.indicator_span;
      u.provenance.value_span = r.value_span;
      u.provenance.unit_span = r.unit_span;
      u.provenance.entities = r.entities;
      result.units.push_back(std::move(u));
      result.records.push_back(r);
    }
  }

  for (const ingest::TableGrid &grid : tables) {
    auto doc = docs.find(grid.doc_id);
    if (doc == docs.end() || grid.rows.empty()) continue;
    std::vector<tablelabel::LineLabel> labels = tablelabel::viterbi_label(grid, model);
    std::vector<tablelabel::ResolvedCell> cells;
    try {
      cells = tablelabel::resolve_cells(grid, labels);
    } catch (const Error &e) {
      if (e.code() == ErrorCode::kNoDataRows) continue;
      throw;
    }
    for (const tablelabel::ResolvedCell &c : cells) {
      std::optional<Decimal> value = cell_value(c.value_text);
      if (!value) continue;
      std::optional<std::string> unit;
      if (trim(c.value_text).back() == '%') unit = "%";
      for (auto it = c.col_header_path.rbegin(); !unit && it != c.col_header_path.rend(); ++it)
        unit = find_unit(*it, gaz);
      for (auto it = c.row_header_path.rbegin(); !unit && it != c.row_header_path.rend(); ++it)
        unit = find_unit(*it, gaz);

      index::IndexedUnit u;
      u.unit_id = grid.doc_id + ":t" + std::to_string(grid.ordinal) + ":r" +
                  std::to_string(c.row) + "c" + std::to_string(c.col);
      u.doc_id = grid.doc_id;
      u.source_type = SourceType::kTable;
      u.indicator = join(c.col_header_path, " ");
      u.text = join({join(c.row_header_path, " "), u.indicator, trim(c.value_text)}, " ");
      u.value = value->to_string();
      u.unit = unit.value_or("");
      Sentence as_text;
      as_text.doc_id = grid.doc_id;
      as_text.text = u.text;
      std::vector<Entity> entities = nlp::ner(as_text, gaz);
      u.entities = entity_terms(entities);
      u.source = source_terms(*doc->second);
      u.provenance.kind = index::Provenance::kTableCell;
      u.provenance.ordinal = grid.ordinal;
      u.provenance.row = static_cast<int>(c.row);
      u.provenance.col = static_cast<int>(c.col);
      u.provenance.entities = std::move(entities);
      result.units.push_back(std::move(u));
    }
  }
  return result;
}

ExtractionResult extract_repository(Repository &repo) {
  std::vector<SourceDocument> docs = repo.documents();
  std::sort(docs.begin(), docs.end(), [](const SourceDocument &a, const SourceDocument &b) {
    return a.id < b.id;
  });
  ExtractionResult result =
      extract_units(docs, repo.sentences(), repo.tables(), repo.grammar(),
                    repo.gazetteer(), repo.labeler_model());

  const std::string tmp = repo.path("extractions.jsonl.tmp");
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    for (const ExtractionRecord &r : result.records) write_jsonl_line(out, json(r));
    out.flush();
    if (!out) throw Error(ErrorCode::kIoFailure, "cannot write " + tmp);
  }
  std::filesystem::rename(tmp, repo.path("extractions.jsonl"));

  index::Index idx(repo.config().bm25);
  for (const SourceDocument &d : docs) idx.register_source(d.id);
  for (const index::IndexedUnit &u : result.units) idx.add_unit(u);
  idx.snapshot(repo.path("index.json"));
  return result;
}

index::Index load_index(const Repository &repo) {
  index::Index idx(repo.config().bm25);
  if (std::filesystem::exists(repo.path("index.json"))) {
    idx.load(repo.path("index.json"));
  }
  // Documents ingested after the last extract are still valid filters.
  for (const SourceDocument &d : repo.documents()) idx.register_source(d.id);
  return idx;
}

RefineResult refine(const index::Index &idx, query::Ledger &ledger,
                    const RefineRequest &request, size_t limit) {
  query::Query q = query::formulate(request.indicator, request.keywords, request.source);
  RefineResult out;
  out.run = query::run(q, idx, limit);
  query::RefinementStep step;
  step.query = q;
  step.top_raw_score = out.run.top_raw_score;
  if (!out.run.hits.empty()) {
    step.top_normalized_score = out.run.hits[0].score.normalized;
    step.top_doc_id = out.run.hits[0].doc_id;
    step.top_source_type = out.run.hits[0].source_type;
  }
  step.result_achieved = request.achieved;
  step.idempotency_key = request.idempotency_key;
  out.record = ledger.record_step(request.indicator, step);
  return out;
}

json hit_json(const index::ScoredHit &hit, const index::Index &idx, size_t rank) {
  json j = {{"rank", rank},
            {"unit_id", hit.unit_id},
            {"doc_id", hit.doc_id},
            {"source_type", to_string(hit.source_type)},
            {"score", hit.score}};
  if (const index::IndexedUnit *u = idx.find(hit.unit_id)) {
    j["indicator"] = u->indicator;
    j["value"] = u->value;
    j["unit"] = u->unit;
    j["text"] = u->text;
    j["entities"] = u->entities;
    j["provenance"] = u->provenance;
  }
  return j;
}

}  // namespace factscout
