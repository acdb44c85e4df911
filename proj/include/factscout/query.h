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

// Queries at the three refinement levels (indicator name, + keywords,
// + source) and the append-only ledger of refinement steps.

#pragma once

#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "factscout/docmodel.h"
#include "factscout/index.h"

namespace factscout::query {

struct Query {
  std::vector<std::string> indicator_terms;
  std::vector<std::string> keywords;
  std::optional<std::string> source_filter;

  friend bool operator==(const Query &, const Query &) = default;
};

void to_json(json &j, const Query &q);
void from_json(const json &j, Query &q);

// Terms are the analyzed indicator name and keyword strings. Throws
// kBlankIndicator when the name has no terms.
Query formulate(std::string_view indicator_name,
                const std::vector<std::string> &keywords = {},
                std::optional<std::string> source = std::nullopt);

struct RunResult {
  std::vector<index::ScoredHit> hits;  // normalized per source type
  double top_raw_score = 0.0;
};

// Searches on indicator_terms followed by keywords, de-duplicated.
RunResult run(const Query &q, const index::Index &idx, size_t limit = 10);

struct RefinementStep {
  Query query;
  double top_raw_score = 0.0;
  double top_normalized_score = 0.0;
  std::optional<std::string> top_doc_id;  // rank-1 hit, if any
  std::optional<SourceType> top_source_type;
  bool result_achieved = false;
  std::string idempotency_key;  // empty when not supplied

  friend bool operator==(const RefinementStep &,
                         const RefinementStep &) = default;
};

struct RefinementRecord {
  std::string indicator_id;
  std::string indicator_name;
  std::vector<RefinementStep> steps;

  int redefinition_count() const {
    return steps.empty() ? 0 : static_cast<int>(steps.size()) - 1;
  }
};

void to_json(json &j, const RefinementStep &s);
void from_json(const json &j, RefinementStep &s);
void to_json(json &j, const RefinementRecord &r);

// Canonical indicator id: lower-cased name with runs of non-alphanumerics
// collapsed to '-'.
std::string indicator_id_for(std::string_view name);

// Append-only JSON-lines log of refinement steps. Each append is written as
// a single line and fsync'ed; an unterminated last line (a crash mid-write)
// is ignored on open. Appends are serialized by an internal mutex.
class Ledger {
 public:
  // In-memory ledger; nothing is persisted.
  Ledger() = default;
  // Opens or creates the log at `path`. Throws kIoFailure or
  // kCorruptSnapshot for a malformed complete line.
  explicit Ledger(std::string path);

  Ledger(const Ledger &) = delete;
  Ledger &operator=(const Ledger &) = delete;

  // Appends a step and returns the indicator's updated record. A step whose
  // non-empty idempotency key was already recorded is not appended again.
  RefinementRecord record_step(const std::string &indicator_name,
                               const RefinementStep &step);

  std::vector<RefinementRecord> records() const;  // ordered by indicator id
  std::optional<RefinementRecord> record(const std::string &indicator_id) const;
  bool empty() const;

 private:
  void apply(const json &line);

  std::string path_;
  mutable std::mutex mu_;
  std::map<std::string, RefinementRecord> records_;
  std::map<std::string, std::string> keys_;  // idempotency key -> indicator
};

RefinementRecord record_step(Ledger &ledger, const std::string &indicator_name,
                             const Query &q, double top_raw_score,
                             bool achieved);

}  // namespace factscout::query
