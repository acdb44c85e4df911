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

// File-backed repository and the workflow operations over it.
//
// Layout under the root:
//   REPO_VERSION        marker; a repository opens only if it matches
//   config.json         resources, BM25 parameters, relevant threshold
//   documents.jsonl     one SourceDocument per line
//   payloads/           raw payload bytes, one file per document
//   sentences.jsonl     segmented sentences of every document
//   tables.jsonl        table grids of every document
//   extractions.jsonl   output of the last `extract`
//   index.json          index snapshot written by `extract`
//   ledger.jsonl        refinement ledger
//
// A document's sentences and tables are written before its line in
// documents.jsonl, so an interrupted ingest leaves no visible document.

#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "factscout/assess.h"
#include "factscout/docmodel.h"
#include "factscout/index.h"
#include "factscout/ingest.h"
#include "factscout/nlp.h"
#include "factscout/query.h"
#include "factscout/tablelabel.h"

namespace factscout {

inline constexpr const char *kRepoVersion = "factscout-repository 1";

struct RepoConfig {
  // Resource paths, relative to the repository root or absolute; empty
  // selects the built-in resource.
  std::string grammar;
  std::string gazetteer;
  std::string labeler_model;
  index::Bm25Params bm25;
  double relevant_threshold = assess::kDefaultRelevantThreshold;
  size_t search_limit = 10;
};

void to_json(json &j, const RepoConfig &c);
void from_json(const json &j, RepoConfig &c);

class Repository {
 public:
  // Creates the layout. Throws kInvalidValue if `root` already holds a
  // repository, kIoFailure on filesystem errors.
  static void init(const std::string &root, const RepoConfig &config = {});
  static bool exists(const std::string &root);
  // Throws kRepositoryVersion, kIoFailure, kMissingPayload.
  static Repository open(const std::string &root);

  const std::string &root() const { return root_; }
  std::string path(const std::string &name) const;
  const RepoConfig &config() const { return config_; }

  const nlp::Gazetteer &gazetteer() const { return *gazetteer_; }
  const nlp::ChunkGrammar &grammar() const { return *grammar_; }
  const tablelabel::LabelerModel &labeler_model() const { return *labeler_; }

  const std::vector<SourceDocument> &documents() const { return documents_; }
  const SourceDocument *find_document(const std::string &id) const;
  std::string read_payload(const SourceDocument &doc) const;

  // Sentences and tables of committed documents, in document id order.
  std::vector<Sentence> sentences() const;
  std::vector<ingest::TableGrid> tables() const;

  // Validates and persists one parsed document. Throws as
  // validate_document, or kIoFailure.
  void add_document(SourceDocument doc, std::string_view payload,
                    const std::vector<Sentence> &sentences,
                    const std::vector<ingest::TableGrid> &tables);

  assess::SourceLookup source_lookup() const;

 private:
  Repository() = default;

  std::string root_;
  RepoConfig config_;
  std::vector<SourceDocument> documents_;
  std::map<std::string, size_t> by_id_;
  std::shared_ptr<const nlp::Gazetteer> gazetteer_;
  std::shared_ptr<const nlp::ChunkGrammar> grammar_;
  std::shared_ptr<const tablelabel::LabelerModel> labeler_;
};

// ---------------------------------------------------------------------------
// Workflow

struct IngestRequest {
  std::optional<std::string> id;  // defaults to "D" + hash of the uri
  std::string uri;
  SourceType type = SourceType::kHtml;
  AccessClass access = AccessClass::kOpen;
  std::string payload;
  std::optional<std::string> title;
  std::string retrieved_at = "1970-01-01T00:00:00Z";
};

struct ParsedSource {
  std::string title;
  std::vector<Sentence> sentences;
  std::vector<ingest::TableGrid> tables;
};

// HTML: markup. PDF_TEXT: the layout sidecar (JSON lines). TABLE: a JSON
// TableGrid object, or CSV text.
ParsedSource parse_source(SourceType type, std::string_view payload,
                          const std::string &doc_id);

std::vector<std::vector<std::string>> parse_csv(std::string_view text);

SourceDocument ingest_source(Repository &repo, const IngestRequest &request);

// Extraction records and index units for a corpus. Sentence triples become
// units of the document's type; numeric table cells become TABLE units.
struct ExtractionResult {
  std::vector<ExtractionRecord> records;
  std::vector<index::IndexedUnit> units;
};

ExtractionResult extract_units(const std::vector<SourceDocument> &documents,
                               const std::vector<Sentence> &sentences,
                               const std::vector<ingest::TableGrid> &tables,
                               const nlp::ChunkGrammar &grammar,
                               const nlp::Gazetteer &gaz,
                               const tablelabel::LabelerModel &model);

// Rebuilds extractions.jsonl and index.json from the stored documents.
ExtractionResult extract_repository(Repository &repo);

// Loads index.json when present, otherwise an index with every document
// registered as a source and no units.
index::Index load_index(const Repository &repo);

struct RefineRequest {
  std::string indicator;
  std::vector<std::string> keywords;
  std::optional<std::string> source;
  bool achieved = false;
  std::string idempotency_key;
};

struct RefineResult {
  query::RunResult run;
  query::RefinementRecord record;
};

RefineResult refine(const index::Index &idx, query::Ledger &ledger,
                    const RefineRequest &request, size_t limit);

// Search hit joined with its unit, as served by the CLI and the API.
json hit_json(const index::ScoredHit &hit, const index::Index &idx, size_t rank);

}  // namespace factscout
