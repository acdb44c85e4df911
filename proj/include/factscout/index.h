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

// In-memory inverted index over extracted units with six fixed fields,
// BM25 scoring with per-field boosts, and JSON snapshots.
//
// Not internally synchronized: any number of concurrent const calls, or a
// single caller of a mutating method.

#pragma once

#include <array>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "factscout/docmodel.h"

namespace factscout::index {

enum Field { kText, kIndicator, kValue, kUnit, kEntities, kSource, kNumFields };

std::string_view field_name(int field);

// Where a unit came from, enough to reopen the source context.
struct Provenance {
  enum Kind { kSentence, kTableCell };
  Kind kind = kSentence;
  int ordinal = 0;  // sentence ordinal, or table ordinal for cells
  int row = -1;     // table cells only
  int col = -1;
  Span indicator_span;  // into the sentence text; empty for cells
  Span value_span;
  Span unit_span;
  std::vector<Entity> entities;

  friend bool operator==(const Provenance &, const Provenance &) = default;
};

struct IndexedUnit {
  std::string unit_id;
  std::string doc_id;
  SourceType source_type = SourceType::kHtml;
  std::string text;
  std::string indicator;
  std::string value;  // decimal rendered as a string
  std::string unit;
  std::vector<std::string> entities;  // "KIND:text"
  std::string source;                 // source title and uri
  Provenance provenance;

  std::string field_text(int field) const;
  friend bool operator==(const IndexedUnit &, const IndexedUnit &) = default;
};

void to_json(json &j, const Provenance &p);
void from_json(const json &j, Provenance &p);
void to_json(json &j, const IndexedUnit &u);
void from_json(const json &j, IndexedUnit &u);

// Lower-cased tokens from nlp::tokenize. Punctuation is dropped unless it is
// a unit surface form ("%"); numbers are rendered in canonical decimal form
// so "1,518" and "1518" are the same term.
std::vector<std::string> analyze(std::string_view text);

struct Bm25Params {
  double k1 = 1.2;
  double b = 0.75;
  std::array<double, kNumFields> boosts = {1.0, 3.0, 0.5, 2.0, 1.0, 0.5};

  friend bool operator==(const Bm25Params &, const Bm25Params &) = default;
};

void to_json(json &j, const Bm25Params &p);
void from_json(const json &j, Bm25Params &p);

double bm25_idf(double n, double df);

struct ScoredHit {
  std::string unit_id;
  std::string doc_id;
  SourceType source_type = SourceType::kHtml;
  RelevanceScore score;
};

// Per-field counts over some set of units.
struct FieldStats {
  size_t unit_count = 0;
  std::array<size_t, kNumFields> field_units{};   // units with the field set
  std::array<size_t, kNumFields> length_sums{};   // total analyzed length
  std::map<std::pair<std::string, int>, size_t> df;

  double avg_length(int field) const;
  size_t doc_freq(const std::string &term, int field) const;
};

class Index {
 public:
  explicit Index(Bm25Params params = {});

  const Bm25Params &params() const { return params_; }

  // Makes `doc_id` a valid source filter even before it has units.
  void register_source(const std::string &doc_id);
  const std::set<std::string> &sources() const { return sources_; }

  // Throws kDuplicateUnitId, or kMissingField for an empty unit_id/doc_id.
  void add_unit(const IndexedUnit &unit);

  size_t size() const { return units_.size(); }
  bool empty() const { return units_.empty(); }
  const std::vector<IndexedUnit> &units() const { return units_; }
  const IndexedUnit *find(const std::string &unit_id) const;

  const FieldStats &stats() const { return global_; }
  // Stats restricted to one source; nullptr for an unknown id.
  const FieldStats *source_stats(const std::string &doc_id) const;

  // BM25 score of one unit against analyzed, de-duplicated terms, with
  // idf and average lengths from `stats` (the global stats by default).
  double bm25_score(const std::vector<std::string> &terms,
                    const IndexedUnit &unit,
                    const FieldStats *stats = nullptr) const;

  // Hits with score > 0 sorted by raw score descending, then unit_id. With
  // a source filter only that source's units are scored, against that
  // source's own statistics. Normalized scores are left at 0. Throws
  // kUnknownSourceFilter, or kInvalidValue for limit < 1.
  std::vector<ScoredHit> search(const std::vector<std::string> &terms,
                                const std::optional<std::string> &source_filter,
                                size_t limit) const;

  json to_json() const;
  // Throws kIndexNotEmpty or kCorruptSnapshot.
  void load_json(const json &j);

  // Throws kIoFailure; writes to a temporary file and renames it in place.
  void snapshot(const std::string &path) const;
  // Throws kIoFailure, kCorruptSnapshot or kIndexNotEmpty.
  void load(const std::string &path);

 private:
  struct Posting {
    uint32_t unit = 0;  // index into units_
    uint32_t tf = 0;
  };
  struct Analyzed {
    std::array<std::map<std::string, uint32_t>, kNumFields> tf;
    std::array<uint32_t, kNumFields> length{};
  };

  static void count_unit(FieldStats &stats, const Analyzed &a);

  Bm25Params params_;
  std::vector<IndexedUnit> units_;
  std::vector<Analyzed> analyzed_;
  std::unordered_map<std::string, uint32_t> by_id_;
  std::unordered_map<std::string, std::array<std::vector<Posting>, kNumFields>>
      postings_;
  std::set<std::string> sources_;
  FieldStats global_;
  std::map<std::string, FieldStats> per_source_;
};

inline constexpr int kSnapshotVersion = 1;

// Within each source type: normalized = raw / max raw of that type (0 when
// the max is 0).
std::vector<ScoredHit> normalize_scores(std::vector<ScoredHit> hits);

}  // namespace factscout::index
