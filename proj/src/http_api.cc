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

#include "factscout/http_api.h"

#include <cctype>
#include <mutex>

#include "httplib.h"

namespace factscout {

namespace {

constexpr const char *kPrefix = "/v1";

ApiResponse json_response(int status, const json &body) {
  return ApiResponse{status, "application/json", body.dump() + "\n"};
}

ApiResponse error_response(int status, const std::string &code,
                           const std::string &message) {
  return json_response(status, json{{"code", code}, {"message", message}});
}

json parse_body(const std::string &body) {
  try {
    json j = json::parse(body);
    if (!j.is_object()) throw Error(ErrorCode::kBadRequest, "body must be a JSON object");
    return j;
  } catch (const json::exception &e) {
    throw Error(ErrorCode::kBadRequest, std::string("malformed JSON: ") + e.what());
  }
}

std::string require_string(const json &body, const char *key) {
  if (!body.contains(key) || !body[key].is_string()) {
    throw Error(ErrorCode::kMissingField, std::string("missing string field: ") + key);
  }
  return body[key].get<std::string>();
}

std::optional<std::string> param(const ApiRequest &r, const std::string &key) {
  auto it = r.params.find(key);
  if (it == r.params.end()) return std::nullopt;
  return it->second;
}

std::vector<std::string> keyword_list(const json &value) {
  if (value.is_null()) return {};
  if (value.is_string()) return {value.get<std::string>()};
  if (value.is_array()) {
    std::vector<std::string> out;
    for (const json &k : value) {
      if (!k.is_string()) throw Error(ErrorCode::kBadRequest, "keywords must be strings");
      out.push_back(k.get<std::string>());
    }
    return out;
  }
  throw Error(ErrorCode::kBadRequest, "keywords must be a string or a list");
}

size_t parse_limit(const std::optional<std::string> &text, size_t fallback) {
  if (!text) return fallback;
  if (text->empty() || text->size() > 6 ||
      !std::all_of(text->begin(), text->end(),
                   [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
    throw Error(ErrorCode::kBadRequest, "limit must be a positive integer");
  }
  size_t limit = std::stoul(*text);
  if (limit < 1) throw Error(ErrorCode::kBadRequest, "limit must be >= 1");
  return limit;
}

}  // namespace

int http_status_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::kNotFound:
    case ErrorCode::kUnknownSourceFilter:
      return 404;
    case ErrorCode::kDuplicateId:
    case ErrorCode::kDuplicateUnitId:
      return 409;
    case ErrorCode::kMissingField:
    case ErrorCode::kUnknownSourceType:
    case ErrorCode::kUnknownEnumValue:
    case ErrorCode::kInvalidValue:
    case ErrorCode::kMalformedMarkup:
    case ErrorCode::kEmptySidecar:
    case ErrorCode::kEmptyGrid:
    case ErrorCode::kNotANumber:
    case ErrorCode::kBlankIndicator:
    case ErrorCode::kOutOfRange:
    case ErrorCode::kBadRequest:
      return 400;
    default:
      return 500;
  }
}

ApiService::ApiService(Repository repo)
    : repo_(std::move(repo)),
      index_(load_index(repo_)),
      ledger_(std::make_unique<query::Ledger>(repo_.path("ledger.jsonl"))) {}

ApiService::~ApiService() { stop(); }

ApiResponse ApiService::handle(const ApiRequest &r) {
  try {
    std::string path = r.path;
    if (path.rfind(kPrefix, 0) != 0) {
      throw Error(ErrorCode::kNotFound, "unknown path: " + path);
    }
    path = path.substr(std::string(kPrefix).size());
    if (path.size() > 1 && path.back() == '/') path.pop_back();
    if (path == "/sources" && r.method == "POST") return post_sources(r);
    if (path == "/search" && r.method == "GET") return get_search(r);
    if (path == "/refinements" && r.method == "POST") return post_refinements(r);
    if ((path == "/indicators" || path.rfind("/indicators/", 0) == 0) &&
        r.method == "GET")
      return get_indicators(r);
    if (path == "/report" && r.method == "GET") return get_report(r);
    for (const char *known : {"/sources", "/search", "/refinements", "/indicators", "/report"}) {
      if (path == known) return error_response(405, "MethodNotAllowed", r.method + " " + r.path);
    }
    throw Error(ErrorCode::kNotFound, "unknown path: " + r.path);
  } catch (const Error &e) {
    return error_response(http_status_for(e.code()), error_code_name(e.code()), e.what());
  } catch (const json::exception &e) {
    return error_response(400, "BadRequest", e.what());
  } catch (const std::exception &e) {
    return error_response(500, "Internal", e.what());
  }
}

ApiResponse ApiService::post_sources(const ApiRequest &r) {
  json body = parse_body(r.body);
  IngestRequest req;
  req.type = parse_source_type(require_string(body, "type"));
  req.uri = require_string(body, "uri");
  req.payload = require_string(body, "payload");
  req.access = parse_access_class(body.value("access_class", "OPEN"));
  if (body.contains("id") && !body["id"].is_null()) req.id = body["id"].get<std::string>();
  if (body.contains("title") && !body["title"].is_null())
    req.title = body["title"].get<std::string>();
  req.retrieved_at = body.value("retrieved_at", req.retrieved_at);

  std::unique_lock lock(mu_);
  SourceDocument doc = ingest_source(repo_, req);
  ExtractionResult extracted = extract_repository(repo_);
  index_ = load_index(repo_);
  size_t units = 0;
  for (const auto &u : extracted.units) units += u.doc_id == doc.id;
  return json_response(201, json{{"document", doc}, {"units", units}});
}

ApiResponse ApiService::get_search(const ApiRequest &r) {
  std::optional<std::string> q = param(r, "q");
  if (!q) throw Error(ErrorCode::kBadRequest, "missing parameter q");
  std::vector<std::string> keywords;
  auto range = r.params.equal_range("keywords");
  for (auto it = range.first; it != range.second; ++it) keywords.push_back(it->second);
  std::optional<std::string> source = param(r, "source");
  if (source && source->empty()) source.reset();

  std::shared_lock lock(mu_);
  size_t limit = parse_limit(param(r, "limit"), repo_.config().search_limit);
  query::Query query = query::formulate(*q, keywords, source);
  query::RunResult run = query::run(query, index_, limit);
  json hits = json::array();
  for (size_t i = 0; i < run.hits.size(); ++i)
    hits.push_back(hit_json(run.hits[i], index_, i + 1));
  return json_response(200, json{{"query", query},
                                 {"top_raw_score", run.top_raw_score},
                                 {"hits", hits}});
}

ApiResponse ApiService::post_refinements(const ApiRequest &r) {
  json body = parse_body(r.body);
  RefineRequest req;
  req.indicator = require_string(body, "indicator");
  req.keywords = keyword_list(body.value("keywords", json()));
  if (body.contains("source") && body["source"].is_string() &&
      !body["source"].get<std::string>().empty())
    req.source = body["source"].get<std::string>();
  if (body.contains("achieved") && !body["achieved"].is_boolean()) {
    throw Error(ErrorCode::kBadRequest, "achieved must be a boolean");
  }
  req.achieved = body.value("achieved", false);
  req.idempotency_key = body.value("idempotency_key", "");
  if (auto h = r.headers.find("idempotency-key"); h != r.headers.end())
    req.idempotency_key = h->second;

  std::unique_lock lock(mu_);
  RefineResult result = refine(index_, *ledger_, req, repo_.config().search_limit);
  json hits = json::array();
  for (size_t i = 0; i < result.run.hits.size(); ++i)
    hits.push_back(hit_json(result.run.hits[i], index_, i + 1));
  return json_response(201, json{{"record", result.record},
                                 {"top_raw_score", result.run.top_raw_score},
                                 {"hits", hits}});
}

ApiResponse ApiService::get_indicators(const ApiRequest &r) {
  std::shared_lock lock(mu_);
  const std::string prefix = std::string(kPrefix) + "/indicators/";
  if (r.path.rfind(prefix, 0) == 0) {
    std::string id = r.path.substr(prefix.size());
    auto rec = ledger_->record(id);
    if (!rec) throw Error(ErrorCode::kNotFound, "unknown indicator: " + id);
    return json_response(200, json(*rec));
  }
  return json_response(200, json{{"indicators", ledger_->records()}});
}

ApiResponse ApiService::get_report(const ApiRequest &r) {
  std::string format = param(r, "format").value_or("json");
  if (format != "json" && format != "csv" && format != "totals-csv") {
    throw Error(ErrorCode::kBadRequest, "format must be json, csv or totals-csv");
  }
  std::shared_lock lock(mu_);
  std::vector<query::RefinementRecord> records = ledger_->records();
  assess::IndicatorReport report =
      records.empty() ? assess::empty_report()
                      : assess::build_report(records, repo_.source_lookup(),
                                             repo_.config().relevant_threshold);
  if (format == "csv") return ApiResponse{200, "text/csv", assess::report_csv(report)};
  if (format == "totals-csv") return ApiResponse{200, "text/csv", assess::totals_csv(report)};
  return json_response(200, assess::report_json(report));
}

void ApiService::install_routes(const std::string &cors_origin) {
  server_ = std::make_unique<httplib::Server>();
  auto relay = [this](const httplib::Request &req, httplib::Response &res) {
    ApiRequest r;
    r.method = req.method;
    r.path = req.path;
    for (const auto &[k, v] : req.params) r.params.emplace(k, v);
    r.body = req.body;
    for (const auto &[k, v] : req.headers) {
      std::string name = k;
      for (char &c : name) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
      r.headers[name] = v;
    }
    ApiResponse out = handle(r);
    res.status = out.status;
    res.set_content(out.body, out.content_type);
  };
  server_->Get(R"(/v1/.*)", relay);
  server_->Post(R"(/v1/.*)", relay);
  server_->Options(R"(/v1/.*)", [](const httplib::Request &, httplib::Response &res) {
    res.status = 204;
  });
  server_->set_post_routing_handler(
      [cors_origin](const httplib::Request &, httplib::Response &res) {
        res.set_header("Access-Control-Allow-Origin", cors_origin);
        res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
        res.set_header("Access-Control-Allow-Headers", "Content-Type, Idempotency-Key");
      });
}

bool ApiService::serve(const std::string &host, int port, const std::string &cors_origin) {
  install_routes(cors_origin);
  return server_->listen(host, port);
}

int ApiService::bind_any_port(const std::string &host, const std::string &cors_origin) {
  install_routes(cors_origin);
  return server_->bind_to_any_port(host);
}

void ApiService::listen_after_bind() {
  if (server_) server_->listen_after_bind();
}

void ApiService::stop() {
  if (server_) server_->stop();
}

}  // namespace factscout
