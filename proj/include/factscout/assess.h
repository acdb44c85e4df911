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

// Suitability and adaptability ratings, and the per-indicator report with
// per-source-type totals.

#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "factscout/docmodel.h"
#include "factscout/index.h"
#include "factscout/query.h"

namespace factscout::assess {

// Ordered: kLow < kMedium < kHigh.
enum class Level { kLow, kMedium, kHigh };

char level_letter(Level level);  // 'L', 'M', 'H'
Level parse_level(std::string_view text);

// [0, 0.4) -> L, [0.4, 0.7) -> M, [0.7, 1] -> H. Throws kOutOfRange.
Level categorize_suitability(double normalized_score);

// 0 -> L, 1 -> M, 2+ -> H. Throws kOutOfRange for a negative count.
Level query_dependence(int redefinition_count);

Level data_dependence(AccessClass access, bool used_source_filter);

// A medium query dependence is rated like a low one.
Level adaptability(Level query_dep, Level data_dep);

enum class ResultStatus { kAchieved, kRelevant, kNotAchieved };

std::string_view to_string(ResultStatus status);

inline constexpr double kDefaultRelevantThreshold = 0.2;

ResultStatus result_status(const std::vector<index::ScoredHit> &hits,
                           bool achieved,
                           double relevant_threshold = kDefaultRelevantThreshold);

struct SourceInfo {
  SourceType type = SourceType::kHtml;
  AccessClass access = AccessClass::kOpen;
};

using SourceLookup =
    std::function<std::optional<SourceInfo>(const std::string &doc_id)>;

struct ReportRow {
  int serial = 0;
  std::string indicator_id;
  std::string indicator;
  std::string query;           // all search terms, space-joined
  std::string data_source;     // doc id, or "Unknown"
  std::string source_type;     // "HTML", "PDF", "Table" or "Unknown"
  std::string added_keywords;  // space-joined
  Level suitability = Level::kLow;
  Level query_dep = Level::kLow;
  Level data_dep = Level::kLow;
  Level adaptability = Level::kLow;
  double relevance_score = 0.0;
  int redefinition_count = 0;
  ResultStatus status = ResultStatus::kNotAchieved;
};

struct TotalsRow {
  std::string data_type;
  int total = 0;
  int achieved = 0;
  int relevant = 0;
  int not_achieved = 0;
};

struct IndicatorReport {
  std::vector<ReportRow> rows;
  // HTML, PDF, Table, Unknown, then Total.
  std::vector<TotalsRow> totals;
};

// One row per indicator, ordered by indicator id, rated from the final
// step. An indicator whose final step has no source (no filter and no hit)
// or whose source is unknown to `lookup` is reported under "Unknown" as not
// achieved. Throws kEmptyLedger, or kInvalidValue for a record without steps.
IndicatorReport build_report(const std::vector<query::RefinementRecord> &records,
                             const SourceLookup &lookup,
                             double relevant_threshold = kDefaultRelevantThreshold);

// Zero rows and all-zero totals, for an empty ledger.
IndicatorReport empty_report();

// Per-indicator columns (S.No through Result achieved), RFC 4180 quoting,
// '\n' line ends.
std::string report_csv(const IndicatorReport &report);
// Per-source-type totals columns.
std::string totals_csv(const IndicatorReport &report);
json report_json(const IndicatorReport &report);

}  // namespace factscout::assess
