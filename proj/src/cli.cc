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

#include "factscout/cli.h"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "factscout/http_api.h"
#include "factscout/repository.h"

namespace factscout {

namespace {

std::string slurp(const std::string &path) {
  if (path == "-") {
    std::stringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoFailure, "cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void emit(const std::string &text, const std::string &out_path, std::ostream &out) {
  if (out_path.empty() || out_path == "-") {
    out << text;
    return;
  }
  std::ofstream f(out_path, std::ios::binary | std::ios::trunc);
  f << text;
  if (!f) throw Error(ErrorCode::kIoFailure, "cannot write " + out_path);
}

// "pdf-text" and "source-specific" are accepted for PDF_TEXT and
// SOURCE_SPECIFIC.
std::string enum_spelling(std::string text) {
  for (char &c : text) {
    c = c == '-' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  }
  return text;
}

Repository open_or_init(const std::string &root) {
  if (!Repository::exists(root)) Repository::init(root);
  return Repository::open(root);
}

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

void print_hits(std::ostream &out, const std::vector<index::ScoredHit> &hits,
                const index::Index &idx) {
  if (hits.empty()) {
    out << "no results\n";
    return;
  }
  out << "rank\traw\tnorm\tid\tvalue\tindicator\n";
  for (size_t i = 0; i < hits.size(); ++i) {
    const index::ScoredHit &h = hits[i];
    const index::IndexedUnit *u = idx.find(h.unit_id);
    out << i + 1 << '\t' << fixed(h.score.raw, 4) << '\t'
        << fixed(h.score.normalized, 2) << '\t' << h.unit_id << '\t'
        << (u ? u->value + (u->unit.empty() ? "" : " " + u->unit) : "") << '\t'
        << (u ? u->indicator : "") << '\n';
  }
}

}  // namespace

int run_cli(int argc, const char *const *argv, std::ostream &out, std::ostream &err) {
  CLI::App app{"FactScout: locate indicator values in heterogeneous sources", "factscout"};
  app.require_subcommand(1);
  std::string repo_path = ".";
  auto add_repo = [&](CLI::App *cmd) {
    cmd->add_option("--repo", repo_path, "Repository directory")
        ->envname("FACTSCOUT_REPO")
        ->capture_default_str();
  };

  // init
  CLI::App *init = app.add_subcommand("init", "Create an empty repository");
  add_repo(init);
  std::string config_path;
  init->add_option("--config", config_path, "config.json to start from")
      ->envname("FACTSCOUT_CONFIG");

  // ingest
  CLI::App *ingest = app.add_subcommand("ingest", "Add a source document");
  add_repo(ingest);
  std::string type_name = "HTML", uri, access = "OPEN", doc_id, title, retrieved_at,
              payload_path;
  ingest->add_option("--type", type_name, "HTML, PDF_TEXT or TABLE (any case, - for _)")->capture_default_str();
  ingest->add_option("--uri", uri, "Source URI")->required();
  ingest->add_option("--access", access, "OPEN, SOURCE_SPECIFIC or SUBSCRIPTION")->capture_default_str();
  ingest->add_option("--id", doc_id, "Document id");
  ingest->add_option("--title", title, "Title override");
  ingest->add_option("--retrieved-at", retrieved_at, "RFC 3339 timestamp");
  ingest->add_option("payload", payload_path, "Payload file, or - for stdin")->required();

  // extract
  CLI::App *extract = app.add_subcommand(
      "extract", "Extract values and rebuild the index, or extract from a sentences file");
  add_repo(extract);
  std::string grammar_path, gazetteer_path, sentences_path;
  extract->add_option("--grammar", grammar_path, "Chunk grammar file");
  extract->add_option("--gazetteer", gazetteer_path, "Gazetteer JSON file");
  extract->add_option("sentences", sentences_path,
                      "Sentences JSON-lines; prints extraction records");

  // search
  CLI::App *search = app.add_subcommand("search", "Rank units for a query");
  add_repo(search);
  std::string query_text, source;
  std::vector<std::string> keywords;
  size_t limit = 0;
  bool as_json = false;
  search->add_option("query", query_text, "Indicator name")->required();
  search->add_option("--keywords,-k", keywords, "Added keywords");
  search->add_option("--source", source, "Restrict to one document id");
  search->add_option("--limit", limit, "Maximum hits")->check(CLI::PositiveNumber);
  search->add_flag("--json", as_json, "Print JSON");

  // refine
  CLI::App *refine_cmd = app.add_subcommand("refine", "Record one refinement step");
  refine_cmd->alias("query");
  add_repo(refine_cmd);
  std::string indicator, idempotency_key;
  std::vector<std::string> refine_keywords;
  std::string refine_source;
  bool achieved = false;
  refine_cmd->add_option("indicator", indicator, "Indicator name")->required();
  refine_cmd->add_option("--keywords,-k", refine_keywords, "Added keywords");
  refine_cmd->add_option("--source", refine_source, "Restrict to one document id");
  refine_cmd->add_flag("--achieved,--mark-achieved", achieved,
                       "Mark the result as achieved");
  refine_cmd->add_option("--idempotency-key", idempotency_key, "Replay-safe step key");
  bool refine_json = false;
  refine_cmd->add_flag("--json", refine_json, "Print JSON");

  // report
  CLI::App *report = app.add_subcommand("report", "Print the indicator report");
  add_repo(report);
  std::string format = "csv", out_path;
  report->add_option("--format", format, "csv, totals-csv or json")
      ->check(CLI::IsMember({"csv", "totals-csv", "json"}))
      ->capture_default_str();
  report->add_option("--out", out_path, "Output file");

  // serve
  CLI::App *serve = app.add_subcommand("serve", "Serve the /v1 HTTP API");
  add_repo(serve);
  std::string host = "127.0.0.1", cors = "*";
  int port = 8080;
  serve->add_option("--host", host)->envname("FACTSCOUT_HOST")->capture_default_str();
  serve->add_option("--port", port)->envname("FACTSCOUT_PORT")->capture_default_str();
  serve->add_option("--cors-origin", cors)->capture_default_str();

  // snapshot
  CLI::App *snapshot = app.add_subcommand("snapshot", "Write the index snapshot");
  add_repo(snapshot);
  std::string snapshot_out;
  snapshot->add_option("--out", snapshot_out, "Output path")->required();

  // tablelabel
  CLI::App *tl = app.add_subcommand("tablelabel", "Train or apply the table line labeler");
  tl->require_subcommand(1);
  CLI::App *train = tl->add_subcommand("train", "Train from labelled tables");
  std::string train_in, train_out;
  int epochs = 10;
  train->add_option("--in", train_in, "Training examples, JSON-lines")->required();
  train->add_option("--out", train_out, "Model output path")->required();
  train->add_option("--epochs", epochs)->capture_default_str();
  CLI::App *apply = tl->add_subcommand("apply", "Label and resolve one table");
  std::string model_path, table_path;
  apply->add_option("--model", model_path, "Model JSON (built-in when omitted)");
  apply->add_option("table", table_path, "TableGrid JSON")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp &e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion &e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError &e) {
    app.exit(e, out, err);
    return 2;
  }

  try {
    if (*init) {
      RepoConfig config;
      if (!config_path.empty()) config = json::parse(slurp(config_path)).get<RepoConfig>();
      Repository::init(repo_path, config);
      out << "initialized " << repo_path << "\n";
    } else if (*ingest) {
      Repository repo = open_or_init(repo_path);
      IngestRequest req;
      req.type = parse_source_type(enum_spelling(type_name));
      req.access = parse_access_class(enum_spelling(access));
      req.uri = uri;
      req.payload = slurp(payload_path);
      if (!doc_id.empty()) req.id = doc_id;
      if (!title.empty()) req.title = title;
      if (!retrieved_at.empty()) req.retrieved_at = retrieved_at;
      SourceDocument doc = ingest_source(repo, req);
      out << doc.id << "\n";
    } else if (*extract) {
      if (!sentences_path.empty()) {
        nlp::ChunkGrammar grammar = grammar_path.empty()
                                        ? nlp::ChunkGrammar::builtin()
                                        : nlp::ChunkGrammar::load(grammar_path);
        nlp::Gazetteer gaz = gazetteer_path.empty() ? nlp::Gazetteer::builtin()
                                                    : nlp::Gazetteer::load(gazetteer_path);
        std::istringstream in(slurp(sentences_path));
        for (const json &j : read_jsonl(in)) {
          Sentence s = j.get<Sentence>();
          for (const ExtractionRecord &r : nlp::chunk_extract(s, grammar, gaz))
            out << json(r).dump() << "\n";
        }
      } else {
        Repository repo = Repository::open(repo_path);
        ExtractionResult result = extract_repository(repo);
        out << result.records.size() << " sentence extractions, " << result.units.size()
            << " indexed units\n";
      }
    } else if (*search) {
      Repository repo = Repository::open(repo_path);
      index::Index idx = load_index(repo);
      std::optional<std::string> filter;
      if (!source.empty()) filter = source;
      query::Query q = query::formulate(query_text, keywords, filter);
      query::RunResult result =
          query::run(q, idx, limit ? limit : repo.config().search_limit);
      if (as_json) {
        json hits = json::array();
        for (size_t i = 0; i < result.hits.size(); ++i)
          hits.push_back(hit_json(result.hits[i], idx, i + 1));
        out << json{{"query", q}, {"top_raw_score", result.top_raw_score}, {"hits", hits}}
                   .dump(2)
            << "\n";
      } else {
        print_hits(out, result.hits, idx);
      }
    } else if (*refine_cmd) {
      Repository repo = Repository::open(repo_path);
      index::Index idx = load_index(repo);
      query::Ledger ledger(repo.path("ledger.jsonl"));
      RefineRequest req;
      req.indicator = indicator;
      req.keywords = refine_keywords;
      if (!refine_source.empty()) req.source = refine_source;
      req.achieved = achieved;
      req.idempotency_key = idempotency_key;
      RefineResult result = refine(idx, ledger, req, repo.config().search_limit);
      if (refine_json) {
        json hits = json::array();
        for (size_t i = 0; i < result.run.hits.size(); ++i)
          hits.push_back(hit_json(result.run.hits[i], idx, i + 1));
        out << json{{"record", result.record},
                    {"top_raw_score", result.run.top_raw_score},
                    {"hits", hits}}
                   .dump(2)
            << "\n";
      } else {
        out << result.record.indicator_id << ": step "
            << result.record.steps.size() << ", redefinitions "
            << result.record.redefinition_count() << ", top raw "
            << fixed(result.run.top_raw_score, 4) << "\n";
        print_hits(out, result.run.hits, idx);
      }
    } else if (*report) {
      Repository repo = Repository::open(repo_path);
      query::Ledger ledger(repo.path("ledger.jsonl"));
      std::vector<query::RefinementRecord> records = ledger.records();
      assess::IndicatorReport r =
          records.empty() ? assess::empty_report()
                          : assess::build_report(records, repo.source_lookup(),
                                                 repo.config().relevant_threshold);
      std::string text = format == "json"         ? assess::report_json(r).dump(2) + "\n"
                         : format == "totals-csv" ? assess::totals_csv(r)
                                                  : assess::report_csv(r);
      emit(text, out_path, out);
    } else if (*serve) {
      ApiService service(Repository::open(repo_path));
      err << "listening on " << host << ":" << port << "\n";
      if (!service.serve(host, port, cors)) {
        throw Error(ErrorCode::kIoFailure,
                    "cannot listen on " + host + ":" + std::to_string(port));
      }
    } else if (*snapshot) {
      Repository repo = Repository::open(repo_path);
      load_index(repo).snapshot(snapshot_out);
    } else if (*train) {
      std::vector<tablelabel::TrainingExample> examples;
      std::istringstream in(slurp(train_in));
      for (const json &j : read_jsonl(in))
        examples.push_back(j.get<tablelabel::TrainingExample>());
      tablelabel::LabelerModel model = tablelabel::train_labeler(examples, epochs);
      emit(model.to_json().dump(2) + "\n", train_out, out);
      out << "training accuracy " << fixed(tablelabel::training_accuracy(examples, model), 4)
          << "\n";
    } else if (*apply) {
      tablelabel::LabelerModel model = model_path.empty()
                                           ? tablelabel::LabelerModel::builtin()
                                           : tablelabel::LabelerModel::load(model_path);
      ingest::TableGrid grid = json::parse(slurp(table_path)).get<ingest::TableGrid>();
      std::vector<tablelabel::LineLabel> labels = tablelabel::viterbi_label(grid, model);
      json names = json::array();
      for (tablelabel::LineLabel l : labels) names.push_back(tablelabel::to_string(l));
      json cells = json::array();
      try {
        cells = tablelabel::resolve_cells(grid, labels);
      } catch (const Error &e) {
        if (e.code() != ErrorCode::kNoDataRows) throw;
      }
      out << json{{"labels", names}, {"cells", cells}}.dump(2) << "\n";
    }
  } catch (const Error &e) {
    err << "factscout: " << error_code_name(e.code()) << ": " << e.what() << "\n";
    return 1;
  } catch (const json::exception &e) {
    err << "factscout: invalid JSON: " << e.what() << "\n";
    return 1;
  } catch (const std::exception &e) {
    err << "factscout: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace factscout
