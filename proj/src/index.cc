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

#include "factscout/index.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "factscout/nlp.h"

namespace factscout::index {

namespace {

constexpr const char *kFieldNames[] = {"text",     "indicator", "value",
                                       "unit",     "entities",  "source"};
constexpr const char *kSnapshotFormat = "factscout-index";

bool has_alnum(std::string_view s) {
  return std::any_of(s.begin(), s.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) ||
           (static_cast<unsigned char>(c) & 0x80);
  });
}

}  // namespace

std::string_view field_name(int field) { return kFieldNames[field]; }

std::string IndexedUnit::field_text(int field) const {
  switch (field) {
    case kText: return text;
    case kIndicator: return indicator;
    case kValue: return value;
    case kUnit: return unit;
    case kEntities: {
      std::string out;
      for (const std::string &e : entities) {
        if (!out.empty()) out += ' ';
        out += e;
      }
      return out;
    }
    case kSource: return source;
  }
  return {};
}

void to_json(json &j, const Provenance &p) {
  j = json{{"kind", p.kind == Provenance::kSentence ? "sentence" : "table_cell"},
           {"ordinal", p.ordinal},
           {"entities", p.entities}};
  if (p.kind == Provenance::kTableCell) {
    j["row"] = p.row;
    j["col"] = p.col;
  } else {
    j["indicator_span"] = p.indicator_span;
    j["value_span"] = p.value_span;
    j["unit_span"] = p.unit_span;
  }
}

void from_json(const json &j, Provenance &p) {
  std::string kind = j.at("kind").get<std::string>();
  if (kind == "sentence") {
    p.kind = Provenance::kSentence;
  } else if (kind == "table_cell") {
    p.kind = Provenance::kTableCell;
  } else {
    throw Error(ErrorCode::kUnknownEnumValue, "unknown provenance kind: " + kind);
  }
  p.ordinal = j.at("ordinal").get<int>();
  p.row = j.value("row", -1);
  p.col = j.value("col", -1);
  p.indicator_span = j.value("indicator_span", Span{});
  p.value_span = j.value("value_span", Span{});
  p.unit_span = j.value("unit_span", Span{});
  p.entities = j.value("entities", std::vector<Entity>{});
}

void to_json(json &j, const IndexedUnit &u) {
  j = json{{"unit_id", u.unit_id},
           {"doc_id", u.doc_id},
           {"source_type", to_string(u.source_type)},
           {"fields",
            {{"text", u.text},
             {"indicator", u.indicator},
             {"value", u.value},
             {"unit", u.unit},
             {"entities", u.entities},
             {"source", u.source}}},
           {"provenance", u.provenance}};
}

void from_json(const json &j, IndexedUnit &u) {
  u.unit_id = j.at("unit_id").get<std::string>();
  u.doc_id = j.at("doc_id").get<std::string>();
  u.source_type = parse_source_type(j.at("source_type").get<std::string>());
  const json &f = j.at("fields");
  u.text = f.value("text", "");
  u.indicator = f.value("indicator", "");
  u.value = f.value("value", "");
  u.unit = f.value("unit", "");
  u.entities = f.value("entities", std::vector<std::string>{});
  u.source = f.value("source", "");
  u.provenance = j.value("provenance", Provenance{});
}

std::vector<std::string> analyze(std::string_view text) {
  const nlp::Gazetteer &gaz = nlp::Gazetteer::builtin();
  std::vector<std::string> out;
  for (const Token &t : nlp::tokenize(text, gaz)) {
    if (!has_alnum(t.text) && !gaz.is_unit(t.text)) continue;
    if (nlp::is_number(t.text)) {
      try {
        out.push_back(nlp::normalize_value(t.text).to_string());
        continue;
      } catch (const Error &) {
        // Too large for a Decimal; index the surface form.
      }
    }
    out.push_back(nlp::lowercase(t.text));
  }
  return out;
}

void to_json(json &j, const Bm25Params &p) {
  json boosts = json::object();
  for (int f = 0; f < kNumFields; ++f) boosts[kFieldNames[f]] = p.boosts[f];
  j = json{{"k1", p.k1}, {"b", p.b}, {"boosts", boosts}};
}

void from_json(const json &j, Bm25Params &p) {
  p = Bm25Params{};
  p.k1 = j.value("k1", p.k1);
  p.b = j.value("b", p.b);
  if (j.contains("boosts")) {
    for (const auto &[name, value] : j.at("boosts").items()) {
      int f = -1;
      for (int i = 0; i < kNumFields; ++i) {
        if (name == kFieldNames[i]) f = i;
      }
      if (f < 0) throw Error(ErrorCode::kInvalidValue, "unknown field: " + name);
      p.boosts[f] = value.get<double>();
    }
  }
  bool ok = std::isfinite(p.k1) && p.k1 >= 0 && std::isfinite(p.b) &&
            p.b >= 0 && p.b <= 1;
  for (double boost : p.boosts) ok = ok && std::isfinite(boost) && boost > 0;
  if (!ok) throw Error(ErrorCode::kInvalidValue, "invalid BM25 parameters");
}

double bm25_idf(double n, double df) {
  return std::log(1.0 + (n - df + 0.5) / (df + 0.5));
}

double FieldStats::avg_length(int field) const {
  return field_units[field] == 0
             ? 0.0
             : static_cast<double>(length_sums[field]) / field_units[field];
}

size_t FieldStats::doc_freq(const std::string &term, int field) const {
  auto it = df.find({term, field});
  return it == df.end() ? 0 : it->second;
}

Index::Index(Bm25Params params) : params_(params) {}

void Index::register_source(const std::string &doc_id) {
  sources_.insert(doc_id);
  per_source_.try_emplace(doc_id);
}

void Index::count_unit(FieldStats &stats, const Analyzed &a) {
  ++stats.unit_count;
  for (int f = 0; f < kNumFields; ++f) {
    if (a.length[f] == 0) continue;
    ++stats.field_units[f];
    stats.length_sums[f] += a.length[f];
    for (const auto &[term, tf] : a.tf[f]) ++stats.df[{term, f}];
  }
}

void Index::add_unit(const IndexedUnit &unit) {
  if (unit.unit_id.empty() || unit.doc_id.empty()) {
    throw Error(ErrorCode::kMissingField, "unit_id and doc_id are required");
  }
  if (by_id_.count(unit.unit_id)) {
    throw Error(ErrorCode::kDuplicateUnitId, "duplicate unit_id: " + unit.unit_id);
  }
  Analyzed a;
  for (int f = 0; f < kNumFields; ++f) {
    for (std::string &term : analyze(unit.field_text(f))) {
      ++a.tf[f][term];
      ++a.length[f];
    }
  }
  auto idx = static_cast<uint32_t>(units_.size());
  for (int f = 0; f < kNumFields; ++f) {
    for (const auto &[term, tf] : a.tf[f]) postings_[term][f].push_back({idx, tf});
  }
  register_source(unit.doc_id);
  count_unit(global_, a);
  count_unit(per_source_[unit.doc_id], a);
  by_id_.emplace(unit.unit_id, idx);
  units_.push_back(unit);
  analyzed_.push_back(std::move(a));
}

const IndexedUnit *Index::find(const std::string &unit_id) const {
  auto it = by_id_.find(unit_id);
  return it == by_id_.end() ? nullptr : &units_[it->second];
}

const FieldStats *Index::source_stats(const std::string &doc_id) const {
  auto it = per_source_.find(doc_id);
  return it == per_source_.end() ? nullptr : &it->second;
}

double Index::bm25_score(const std::vector<std::string> &terms,
                         const IndexedUnit &unit,
                         const FieldStats *stats) const {
  if (stats == nullptr) stats = &global_;
  auto it = by_id_.find(unit.unit_id);
  if (it == by_id_.end()) return 0.0;
  const Analyzed &a = analyzed_[it->second];
  const double n = static_cast<double>(stats->unit_count);
  double score = 0.0;
  for (int f = 0; f < kNumFields; ++f) {
    if (a.length[f] == 0) continue;
    const double norm = params_.k1 * (1.0 - params_.b +
                                      params_.b * a.length[f] / stats->avg_length(f));
    for (const std::string &term : terms) {
      auto tf_it = a.tf[f].find(term);
      if (tf_it == a.tf[f].end()) continue;
      const double tf = tf_it->second;
      const double idf = bm25_idf(n, static_cast<double>(stats->doc_freq(term, f)));
      score += params_.boosts[f] * idf * tf * (params_.k1 + 1.0) / (tf + norm);
    }
  }
  return score;
}

std::vector<ScoredHit> Index::search(const std::vector<std::string> &raw_terms,
                                     const std::optional<std::string> &source_filter,
                                     size_t limit) const {
  if (limit < 1) throw Error(ErrorCode::kInvalidValue, "limit must be >= 1");
  const FieldStats *stats = &global_;
  if (source_filter) {
    if (!sources_.count(*source_filter)) {
      throw Error(ErrorCode::kUnknownSourceFilter,
                  "no ingested source: " + *source_filter);
    }
    stats = &per_source_.at(*source_filter);
  }
  std::vector<std::string> terms;
  for (const std::string &t : raw_terms) {
    if (std::find(terms.begin(), terms.end(), t) == terms.end()) terms.push_back(t);
  }

  std::set<uint32_t> candidates;
  for (const std::string &term : terms) {
    auto it = postings_.find(term);
    if (it == postings_.end()) continue;
    for (const auto &list : it->second) {
      for (const Posting &p : list) {
        if (source_filter && units_[p.unit].doc_id != *source_filter) continue;
        candidates.insert(p.unit);
      }
    }
  }

  std::vector<ScoredHit> hits;
  for (uint32_t idx : candidates) {
    const IndexedUnit &u = units_[idx];
    double score = bm25_score(terms, u, stats);
    if (score <= 0) continue;
    hits.push_back(ScoredHit{u.unit_id, u.doc_id, u.source_type, {score, 0.0}});
  }
  std::sort(hits.begin(), hits.end(), [](const ScoredHit &a, const ScoredHit &b) {
    if (a.score.raw != b.score.raw) return a.score.raw > b.score.raw;
    return a.unit_id < b.unit_id;
  });
  if (hits.size() > limit) hits.resize(limit);
  return hits;
}

json Index::to_json() const {
  json units = json::array();
  for (const IndexedUnit &u : units_) units.push_back(u);
  return json{{"format", kSnapshotFormat},
              {"version", kSnapshotVersion},
              {"unit_count", units_.size()},
              {"params", params_},
              {"sources", sources_},
              {"units", std::move(units)}};
}

void Index::load_json(const json &j) {
  if (!units_.empty() || !sources_.empty()) {
    throw Error(ErrorCode::kIndexNotEmpty, "load requires a fresh index");
  }
  try {
    if (!j.is_object() || j.value("format", "") != kSnapshotFormat) {
      throw Error(ErrorCode::kCorruptSnapshot, "not an index snapshot");
    }
    if (j.at("version").get<int>() != kSnapshotVersion) {
      throw Error(ErrorCode::kCorruptSnapshot, "unsupported snapshot version");
    }
    const json &units = j.at("units");
    if (units.size() != j.at("unit_count").get<size_t>()) {
      throw Error(ErrorCode::kCorruptSnapshot, "unit_count does not match");
    }
    Index fresh(j.at("params").get<Bm25Params>());
    for (const json &s : j.value("sources", json::array()))
      fresh.register_source(s.get<std::string>());
    for (const json &u : units) fresh.add_unit(u.get<IndexedUnit>());
    *this = std::move(fresh);
  } catch (const json::exception &e) {
    throw Error(ErrorCode::kCorruptSnapshot, std::string("snapshot: ") + e.what());
  } catch (const Error &e) {
    if (e.code() == ErrorCode::kCorruptSnapshot) throw;
    throw Error(ErrorCode::kCorruptSnapshot, std::string("snapshot: ") + e.what());
  }
}

void Index::snapshot(const std::string &path) const {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::kIoFailure, "cannot write " + tmp);
    out << to_json().dump(1) << '\n';
    out.flush();
    if (!out) throw Error(ErrorCode::kIoFailure, "write failed: " + tmp);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    throw Error(ErrorCode::kIoFailure, "cannot rename " + tmp + " to " + path);
  }
}

void Index::load(const std::string &path) {
  if (!units_.empty() || !sources_.empty()) {
    throw Error(ErrorCode::kIndexNotEmpty, "load requires a fresh index");
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoFailure, "cannot open " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception &e) {
    throw Error(ErrorCode::kCorruptSnapshot, path + ": " + e.what());
  }
  load_json(j);
}

std::vector<ScoredHit> normalize_scores(std::vector<ScoredHit> hits) {
  std::map<SourceType, double> max_raw;
  for (const ScoredHit &h : hits) {
    double &m = max_raw[h.source_type];
    m = std::max(m, h.score.raw);
  }
  for (ScoredHit &h : hits) {
    double m = max_raw[h.source_type];
    h.score.normalized = m > 0 ? h.score.raw / m : 0.0;
  }
  return hits;
}

}  // namespace factscout::index
