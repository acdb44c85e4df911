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

#include "factscout/assess.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>

namespace factscout::assess {

char level_letter(Level level) {
  switch (level) {
    case Level::kLow: return 'L';
    case Level::kMedium: return 'M';
    case Level::kHigh: return 'H';
  }
  return '?';
}

Level parse_level(std::string_view text) {
  if (text == "L") return Level::kLow;
  if (text == "M") return Level::kMedium;
  if (text == "H") return Level::kHigh;
  throw Error(ErrorCode::kUnknownEnumValue, "unknown level: " + std::string(text));
}

Level categorize_suitability(double score) {
  if (!(score >= 0.0 && score <= 1.0)) {
    throw Error(ErrorCode::kOutOfRange, "score must be in [0, 1]");
  }
  if (score < 0.4) return Level::kLow;
  if (score < 0.7) return Level::kMedium;
  return Level::kHigh;
}

Level query_dependence(int redefinition_count) {
  if (redefinition_count < 0) {
    throw Error(ErrorCode::kOutOfRange, "redefinition count must be >= 0");
  }
  if (redefinition_count == 0) return Level::kLow;
  if (redefinition_count == 1) return Level::kMedium;
  return Level::kHigh;
}

Level data_dependence(AccessClass access, bool used_source_filter) {
  if (access == AccessClass::kSubscription && used_source_filter) return Level::kHigh;
  if (used_source_filter || access == AccessClass::kSourceSpecific)
    return Level::kMedium;
  return Level::kLow;
}

Level adaptability(Level query_dep, Level data_dep) {
  if (query_dep == Level::kHigh) {
    return data_dep == Level::kLow ? Level::kMedium : Level::kLow;
  }
  switch (data_dep) {
    case Level::kLow: return Level::kHigh;
    case Level::kMedium: return Level::kMedium;
    case Level::kHigh: return Level::kLow;
  }
  return Level::kLow;
}

std::string_view to_string(ResultStatus status) {
  switch (status) {
    case ResultStatus::kAchieved: return "ACHIEVED";
    case ResultStatus::kRelevant: return "RELEVANT";
    case ResultStatus::kNotAchieved: return "NOT_ACHIEVED";
  }
  return "";
}

namespace {

ResultStatus status_from(bool achieved, bool has_hits, double top_normalized,
                         double threshold) {
  if (achieved) return ResultStatus::kAchieved;
  if (has_hits && top_normalized >= threshold) return ResultStatus::kRelevant;
  return ResultStatus::kNotAchieved;
}

std::string display_type(SourceType type) {
  switch (type) {
    case SourceType::kHtml: return "HTML";
    case SourceType::kPdfText: return "PDF";
    case SourceType::kTable: return "Table";
  }
  return "Unknown";
}

std::string join(const std::vector<std::string> &parts) {
  std::string out;
  for (const std::string &p : parts) {
    if (!out.empty()) out += ' ';
    out += p;
  }
  return out;
}

std::string csv_field(const std::string &s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string fixed2(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string result_cell(ResultStatus s) {
  switch (s) {
    case ResultStatus::kAchieved: return "Y";
    case ResultStatus::kRelevant: return "Relevant results";
    case ResultStatus::kNotAchieved: return "N";
  }
  return "";
}

}  // namespace

ResultStatus result_status(const std::vector<index::ScoredHit> &hits,
                           bool achieved, double relevant_threshold) {
  double top = hits.empty() ? 0.0 : hits.front().score.normalized;
  return status_from(achieved, !hits.empty(), top, relevant_threshold);
}

IndicatorReport build_report(const std::vector<query::RefinementRecord> &records,
                             const SourceLookup &lookup,
                             double relevant_threshold) {
  if (records.empty()) throw Error(ErrorCode::kEmptyLedger, "ledger is empty");
  std::vector<const query::RefinementRecord *> ordered;
  for (const auto &r : records) {
    if (r.steps.empty()) {
      throw Error(ErrorCode::kInvalidValue, "indicator without steps: " + r.indicator_id);
    }
    ordered.push_back(&r);
  }
  std::stable_sort(ordered.begin(), ordered.end(), [](auto *a, auto *b) {
    return a->indicator_id < b->indicator_id;
  });

  IndicatorReport report;
  const std::vector<std::string> kTypes = {"HTML", "PDF", "Table", "Unknown"};
  std::map<std::string, TotalsRow> totals;
  for (const std::string &t : kTypes) totals[t].data_type = t;

  int serial = 0;
  for (const query::RefinementRecord *rec : ordered) {
    const query::RefinementStep &last = rec->steps.back();
    ReportRow row;
    row.serial = ++serial;
    row.indicator_id = rec->indicator_id;
    row.indicator = rec->indicator_name;
    std::vector<std::string> terms = last.query.indicator_terms;
    terms.insert(terms.end(), last.query.keywords.begin(), last.query.keywords.end());
    row.query = join(terms);
    row.added_keywords = join(last.query.keywords);
    row.redefinition_count = rec->redefinition_count();

    std::optional<std::string> source =
        last.query.source_filter ? last.query.source_filter : last.top_doc_id;
    std::optional<SourceInfo> info;
    if (source && lookup) info = lookup(*source);

    bool used_filter = last.query.source_filter.has_value();
    row.query_dep = query_dependence(row.redefinition_count);
    if (info) {
      row.data_source = *source;
      row.source_type = display_type(last.top_source_type.value_or(info->type));
      row.relevance_score = std::clamp(last.top_normalized_score, 0.0, 1.0);
      row.data_dep = data_dependence(info->access, used_filter);
      row.status = status_from(last.result_achieved, last.top_doc_id.has_value(),
                               row.relevance_score, relevant_threshold);
    } else {
      row.data_source = "Unknown";
      row.source_type = "Unknown";
      row.relevance_score = 0.0;
      row.data_dep = data_dependence(AccessClass::kOpen, used_filter);
      row.status = ResultStatus::kNotAchieved;
    }
    row.suitability = categorize_suitability(row.relevance_score);
    row.adaptability = adaptability(row.query_dep, row.data_dep);

    TotalsRow &t = totals[row.source_type];
    ++t.total;
    if (row.status == ResultStatus::kAchieved) ++t.achieved;
    if (row.status == ResultStatus::kRelevant) ++t.relevant;
    if (row.status == ResultStatus::kNotAchieved) ++t.not_achieved;
    report.rows.push_back(std::move(row));
  }

  TotalsRow all{"Total"};
  for (const std::string &t : kTypes) {
    const TotalsRow &r = totals[t];
    all.total += r.total;
    all.achieved += r.achieved;
    all.relevant += r.relevant;
    all.not_achieved += r.not_achieved;
    report.totals.push_back(r);
  }
  report.totals.push_back(all);
  return report;
}

IndicatorReport empty_report() {
  IndicatorReport report;
  for (const char *t : {"HTML", "PDF", "Table", "Unknown", "Total"})
    report.totals.push_back(TotalsRow{t});
  return report;
}

std::string report_csv(const IndicatorReport &report) {
  std::string out =
      "S.No,Indicator,Query,Data source,Source Type,Added Keywords,"
      "Suitability,Adaptability,Relevance score,Result achieved\n";
  for (const ReportRow &r : report.rows) {
    out += std::to_string(r.serial) + ',' + csv_field(r.indicator) + ',' +
           csv_field(r.query) + ',' + csv_field(r.data_source) + ',' +
           csv_field(r.source_type) + ',' + csv_field(r.added_keywords) + ',' +
           level_letter(r.suitability) + ',' + level_letter(r.adaptability) + ',' +
           fixed2(r.relevance_score) + ',' + result_cell(r.status) + '\n';
  }
  return out;
}

std::string totals_csv(const IndicatorReport &report) {
  std::string out =
      "Data Type,Total Queries,Results achieved,Relevant results,"
      "Results not achieved\n";
  for (const TotalsRow &t : report.totals) {
    out += t.data_type + ',' + std::to_string(t.total) + ',' +
           std::to_string(t.achieved) + ',' + std::to_string(t.relevant) + ',' +
           std::to_string(t.not_achieved) + '\n';
  }
  return out;
}

json report_json(const IndicatorReport &report) {
  json rows = json::array();
  for (const ReportRow &r : report.rows) {
    rows.push_back({{"S.No", r.serial},
                    {"Indicator", r.indicator},
                    {"Query", r.query},
                    {"Data source", r.data_source},
                    {"Source Type", r.source_type},
                    {"Added Keywords", r.added_keywords},
                    {"Suitability", std::string(1, level_letter(r.suitability))},
                    {"Adaptability", std::string(1, level_letter(r.adaptability))},
                    {"Relevance score", fixed2(r.relevance_score)},
                    {"Result achieved", result_cell(r.status)},
                    {"indicator_id", r.indicator_id},
                    {"status", to_string(r.status)},
                    {"query_dependence", std::string(1, level_letter(r.query_dep))},
                    {"data_dependence", std::string(1, level_letter(r.data_dep))},
                    {"redefinition_count", r.redefinition_count}});
  }
  json totals = json::array();
  for (const TotalsRow &t : report.totals) {
    totals.push_back({{"Data Type", t.data_type},
                      {"Total Queries", t.total},
                      {"Results achieved", t.achieved},
                      {"Relevant results", t.relevant},
                      {"Results not achieved", t.not_achieved}});
  }
  return json{{"rows", rows}, {"totals", totals}};
}

}  // namespace factscout::assess
