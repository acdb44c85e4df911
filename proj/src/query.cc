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

#include "factscout/query.h"

#include <fcntl.h>
#include <unistd.h>

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

namespace factscout::query {

void to_json(json &j, const Query &q) {
  j = json{{"indicator_terms", q.indicator_terms}, {"keywords", q.keywords}};
  j["source_filter"] = q.source_filter ? json(*q.source_filter) : json(nullptr);
}

void from_json(const json &j, Query &q) {
  q.indicator_terms = j.at("indicator_terms").get<std::vector<std::string>>();
  q.keywords = j.value("keywords", std::vector<std::string>{});
  q.source_filter.reset();
  if (j.contains("source_filter") && !j["source_filter"].is_null())
    q.source_filter = j["source_filter"].get<std::string>();
  if (q.indicator_terms.empty()) {
    throw Error(ErrorCode::kBlankIndicator, "query has no indicator terms");
  }
}

Query formulate(std::string_view indicator_name,
                const std::vector<std::string> &keywords,
                std::optional<std::string> source) {
  Query q;
  q.indicator_terms = index::analyze(indicator_name);
  if (q.indicator_terms.empty()) {
    throw Error(ErrorCode::kBlankIndicator, "indicator name is blank");
  }
  for (const std::string &k : keywords) {
    for (std::string &t : index::analyze(k)) q.keywords.push_back(std::move(t));
  }
  if (source && !source->empty()) q.source_filter = std::move(source);
  return q;
}

RunResult run(const Query &q, const index::Index &idx, size_t limit) {
  std::vector<std::string> terms = q.indicator_terms;
  terms.insert(terms.end(), q.keywords.begin(), q.keywords.end());
  RunResult result;
  result.hits = index::normalize_scores(idx.search(terms, q.source_filter, limit));
  if (!result.hits.empty()) result.top_raw_score = result.hits[0].score.raw;
  return result;
}

void to_json(json &j, const RefinementStep &s) {
  j = json{{"query", s.query},
           {"top_raw_score", s.top_raw_score},
           {"top_normalized_score", s.top_normalized_score},
           {"result_achieved", s.result_achieved}};
  j["top_doc_id"] = s.top_doc_id ? json(*s.top_doc_id) : json(nullptr);
  j["top_source_type"] =
      s.top_source_type ? json(to_string(*s.top_source_type)) : json(nullptr);
  if (!s.idempotency_key.empty()) j["idempotency_key"] = s.idempotency_key;
}

void from_json(const json &j, RefinementStep &s) {
  s.query = j.at("query").get<Query>();
  s.top_raw_score = j.value("top_raw_score", 0.0);
  s.top_normalized_score = j.value("top_normalized_score", 0.0);
  s.result_achieved = j.value("result_achieved", false);
  s.top_doc_id.reset();
  if (j.contains("top_doc_id") && !j["top_doc_id"].is_null())
    s.top_doc_id = j["top_doc_id"].get<std::string>();
  s.top_source_type.reset();
  if (j.contains("top_source_type") && !j["top_source_type"].is_null())
    s.top_source_type = parse_source_type(j["top_source_type"].get<std::string>());
  s.idempotency_key = j.value("idempotency_key", "");
}

void to_json(json &j, const RefinementRecord &r) {
  j = json{{"indicator_id", r.indicator_id},
           {"indicator", r.indicator_name},
           {"redefinition_count", r.redefinition_count()},
           {"steps", r.steps}};
}

std::string indicator_id_for(std::string_view name) {
  std::string id;
  bool dash = false;
  for (char c : name) {
    if (std::isalnum(static_cast<unsigned char>(c))) {
      if (dash && !id.empty()) id += '-';
      dash = false;
      id += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    } else {
      dash = true;
    }
  }
  return id;
}

Ledger::Ledger(std::string path) : path_(std::move(path)) {
  std::ifstream in(path_, std::ios::binary);
  if (!in) {
    std::ofstream create(path_, std::ios::app);
    if (!create) throw Error(ErrorCode::kIoFailure, "cannot create " + path_);
    return;
  }
  std::stringstream ss;
  ss << in.rdbuf();
  std::string content = ss.str();
  size_t pos = 0;
  int lineno = 0;
  while (pos < content.size()) {
    size_t nl = content.find('\n', pos);
    if (nl == std::string::npos) break;  // torn final write
    std::string line = content.substr(pos, nl - pos);
    pos = nl + 1;
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      apply(json::parse(line));
    } catch (const std::exception &e) {
      throw Error(ErrorCode::kCorruptSnapshot, path_ + ":" + std::to_string(lineno) +
                                                   ": " + e.what());
    }
  }
  if (pos < content.size()) {
    // Drop the torn tail so the next append starts on a fresh line.
    if (::truncate(path_.c_str(), static_cast<off_t>(pos)) != 0) {
      throw Error(ErrorCode::kIoFailure, "cannot repair " + path_);
    }
  }
}

void Ledger::apply(const json &line) {
  std::string name = line.at("indicator").get<std::string>();
  RefinementStep step = line.at("step").get<RefinementStep>();
  std::string id = indicator_id_for(name);
  RefinementRecord &rec = records_[id];
  rec.indicator_id = id;
  if (rec.indicator_name.empty()) rec.indicator_name = name;
  if (!step.idempotency_key.empty()) keys_[step.idempotency_key] = id;
  rec.steps.push_back(std::move(step));
}

RefinementRecord Ledger::record_step(const std::string &indicator_name,
                                     const RefinementStep &step) {
  std::string id = indicator_id_for(indicator_name);
  if (id.empty()) throw Error(ErrorCode::kBlankIndicator, "indicator name is blank");
  std::lock_guard lock(mu_);
  if (!step.idempotency_key.empty()) {
    if (auto it = keys_.find(step.idempotency_key); it != keys_.end()) {
      return records_.at(it->second);
    }
  }
  json line = {{"indicator", indicator_name}, {"step", step}};
  if (!path_.empty()) {
    std::string text = line.dump() + "\n";
    int fd = ::open(path_.c_str(), O_WRONLY | O_APPEND | O_CREAT, 0644);
    if (fd < 0) throw Error(ErrorCode::kIoFailure, "cannot open " + path_);
    size_t done = 0;
    while (done < text.size()) {
      ssize_t n = ::write(fd, text.data() + done, text.size() - done);
      if (n <= 0) {
        ::close(fd);
        throw Error(ErrorCode::kIoFailure, "append failed: " + path_);
      }
      done += static_cast<size_t>(n);
    }
    ::fsync(fd);
    ::close(fd);
  }
  apply(line);
  return records_.at(id);
}

std::vector<RefinementRecord> Ledger::records() const {
  std::lock_guard lock(mu_);
  std::vector<RefinementRecord> out;
  for (const auto &[id, rec] : records_) out.push_back(rec);
  return out;
}

std::optional<RefinementRecord> Ledger::record(const std::string &indicator_id) const {
  std::lock_guard lock(mu_);
  auto it = records_.find(indicator_id);
  if (it == records_.end()) return std::nullopt;
  return it->second;
}

bool Ledger::empty() const {
  std::lock_guard lock(mu_);
  return records_.empty();
}

RefinementRecord record_step(Ledger &ledger, const std::string &indicator_name,
                             const Query &q, double top_raw_score,
                             bool achieved) {
  RefinementStep step;
  step.query = q;
  step.top_raw_score = top_raw_score;
  step.result_achieved = achieved;
  return ledger.record_step(indicator_name, step);
}

}  // namespace factscout::query
