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

#include "factscout/repository.h"

#include <fcntl.h>
#include <unistd.h>

#include <cctype>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace factscout {

namespace fs = std::filesystem;

namespace {

std::string read_file(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoFailure, "cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string &path, std::string_view bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  out.flush();
  if (!out) throw Error(ErrorCode::kIoFailure, "cannot write " + path);
}

// Appends in one write(2) and syncs, so a line is either whole or torn at
// the very end of the file.
void append_durably(const std::string &path, const std::string &text) {
  int fd = ::open(path.c_str(), O_WRONLY | O_APPEND | O_CREAT, 0644);
  if (fd < 0) throw Error(ErrorCode::kIoFailure, "cannot open " + path);
  size_t done = 0;
  while (done < text.size()) {
    ssize_t n = ::write(fd, text.data() + done, text.size() - done);
    if (n <= 0) {
      ::close(fd);
      throw Error(ErrorCode::kIoFailure, "append failed: " + path);
    }
    done += static_cast<size_t>(n);
  }
  ::fsync(fd);
  ::close(fd);
}

// JSON lines, skipping an unterminated final line.
std::vector<json> read_complete_lines(const std::string &path) {
  std::string content = read_file(path);
  size_t end = content.rfind('\n');
  content.resize(end == std::string::npos ? 0 : end + 1);
  std::istringstream in(content);
  return read_jsonl(in);
}

bool valid_doc_id(const std::string &id) {
  if (id.empty() || id[0] == '.') return false;
  for (char c : id) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '-' && c != '_' &&
        c != '.')
      return false;
  }
  return true;
}

const char *payload_extension(SourceType type) {
  switch (type) {
    case SourceType::kHtml: return ".html";
    case SourceType::kPdfText: return ".jsonl";
    case SourceType::kTable: return ".table";
  }
  return ".bin";
}

template <typename T>
std::shared_ptr<const T> builtin_ptr(const T &value) {
  return std::shared_ptr<const T>(&value, [](const T *) {});
}

}  // namespace

void to_json(json &j, const RepoConfig &c) {
  j = json{{"grammar", c.grammar},
           {"gazetteer", c.gazetteer},
           {"labeler_model", c.labeler_model},
           {"bm25", c.bm25},
           {"relevant_threshold", c.relevant_threshold},
           {"search_limit", c.search_limit}};
}

void from_json(const json &j, RepoConfig &c) {
  c = RepoConfig{};
  c.grammar = j.value("grammar", "");
  c.gazetteer = j.value("gazetteer", "");
  c.labeler_model = j.value("labeler_model", "");
  if (j.contains("bm25")) c.bm25 = j.at("bm25").get<index::Bm25Params>();
  c.relevant_threshold = j.value("relevant_threshold", c.relevant_threshold);
  c.search_limit = j.value("search_limit", c.search_limit);
  if (!(c.relevant_threshold >= 0 && c.relevant_threshold <= 1) ||
      c.search_limit < 1) {
    throw Error(ErrorCode::kInvalidValue, "invalid config values");
  }
}

bool Repository::exists(const std::string &root) {
  return fs::exists(fs::path(root) / "REPO_VERSION");
}

void Repository::init(const std::string &root, const RepoConfig &config) {
  if (exists(root)) {
    throw Error(ErrorCode::kInvalidValue, "already a repository: " + root);
  }
  std::error_code ec;
  fs::create_directories(fs::path(root) / "payloads", ec);
  if (ec) throw Error(ErrorCode::kIoFailure, "cannot create " + root + ": " + ec.message());
  fs::path base(root);
  write_file((base / "config.json").string(), json(config).dump(2) + "\n");
  for (const char *name : {"documents.jsonl", "sentences.jsonl", "tables.jsonl",
                           "ledger.jsonl"}) {
    write_file((base / name).string(), "");
  }
  // The marker goes last: a half-created directory does not open.
  write_file((base / "REPO_VERSION").string(), std::string(kRepoVersion) + "\n");
}

Repository Repository::open(const std::string &root) {
  Repository repo;
  repo.root_ = root;
  std::string marker;
  try {
    marker = read_file(repo.path("REPO_VERSION"));
  } catch (const Error &) {
    throw Error(ErrorCode::kRepositoryVersion, "not a repository: " + root);
  }
  while (!marker.empty() && std::isspace(static_cast<unsigned char>(marker.back())))
    marker.pop_back();
  if (marker != kRepoVersion) {
    throw Error(ErrorCode::kRepositoryVersion,
                "repository version mismatch: '" + marker + "'");
  }
  try {
    repo.config_ = json::parse(read_file(repo.path("config.json"))).get<RepoConfig>();
  } catch (const json::exception &e) {
    throw Error(ErrorCode::kInvalidValue, std::string("config.json: ") + e.what());
  }
  auto resolve = [&](const std::string &p) {
    return fs::path(p).is_absolute() ? p : repo.path(p);
  };
  const RepoConfig &c = repo.config_;
  repo.gazetteer_ = c.gazetteer.empty()
                        ? builtin_ptr(nlp::Gazetteer::builtin())
                        : std::make_shared<const nlp::Gazetteer>(
                              nlp::Gazetteer::load(resolve(c.gazetteer)));
  repo.grammar_ = c.grammar.empty()
                      ? builtin_ptr(nlp::ChunkGrammar::builtin())
                      : std::make_shared<const nlp::ChunkGrammar>(
                            nlp::ChunkGrammar::load(resolve(c.grammar)));
  repo.labeler_ = c.labeler_model.empty()
                      ? builtin_ptr(tablelabel::LabelerModel::builtin())
                      : std::make_shared<const tablelabel::LabelerModel>(
                            tablelabel::LabelerModel::load(resolve(c.labeler_model)));

  for (const json &j : read_complete_lines(repo.path("documents.jsonl"))) {
    SourceDocument doc = j.get<SourceDocument>();
    if (!fs::exists(repo.path(doc.payload_ref))) {
      throw Error(ErrorCode::kMissingPayload, "payload missing: " + doc.payload_ref);
    }
    repo.by_id_[doc.id] = repo.documents_.size();
    repo.documents_.push_back(std::move(doc));
  }
  return repo;
}

std::string Repository::path(const std::string &name) const {
  return (fs::path(root_) / name).string();
}

const SourceDocument *Repository::find_document(const std::string &id) const {
  auto it = by_id_.find(id);
  return it == by_id_.end() ? nullptr : &documents_[it->second];
}

std::string Repository::read_payload(const SourceDocument &doc) const {
  return read_file(path(doc.payload_ref));
}

std::vector<Sentence> Repository::sentences() const {
  // Keyed by (doc, ordinal): lines left by an interrupted ingest are
  // superseded by the retry that committed the document.
  std::map<std::pair<std::string, int>, Sentence> latest;
  for (const json &j : read_complete_lines(path("sentences.jsonl"))) {
    Sentence s = j.get<Sentence>();
    if (!by_id_.count(s.doc_id)) continue;
    latest[{s.doc_id, s.ordinal}] = std::move(s);
  }
  std::vector<Sentence> out;
  for (auto &[key, s] : latest) out.push_back(std::move(s));
  return out;
}

std::vector<ingest::TableGrid> Repository::tables() const {
  std::map<std::pair<std::string, int>, ingest::TableGrid> latest;
  for (const json &j : read_complete_lines(path("tables.jsonl"))) {
    ingest::TableGrid t = j.get<ingest::TableGrid>();
    if (!by_id_.count(t.doc_id)) continue;
    latest[{t.doc_id, t.ordinal}] = std::move(t);
  }
  std::vector<ingest::TableGrid> out;
  for (auto &[key, t] : latest) out.push_back(std::move(t));
  return out;
}

void Repository::add_document(SourceDocument doc, std::string_view payload,
                              const std::vector<Sentence> &sentences,
                              const std::vector<ingest::TableGrid> &tables) {
  if (!valid_doc_id(doc.id)) {
    throw Error(ErrorCode::kInvalidValue,
                "document id must be letters, digits, '.', '-' or '_': " + doc.id);
  }
  doc.payload_ref = "payloads/" + doc.id + payload_extension(doc.source_type);
  DocumentContext ctx;
  ctx.id_exists = [&](const std::string &id) { return by_id_.count(id) > 0; };
  validate_document(doc, ctx);

  write_file(path(doc.payload_ref), payload);
  std::string lines;
  for (const Sentence &s : sentences) lines += json(s).dump() + "\n";
  if (!lines.empty()) append_durably(path("sentences.jsonl"), lines);
  lines.clear();
  for (const ingest::TableGrid &t : tables) lines += json(t).dump() + "\n";
  if (!lines.empty()) append_durably(path("tables.jsonl"), lines);
  append_durably(path("documents.jsonl"), json(doc).dump() + "\n");

  by_id_[doc.id] = documents_.size();
  documents_.push_back(std::move(doc));
}

assess::SourceLookup Repository::source_lookup() const {
  std::map<std::string, assess::SourceInfo> info;
  for (const SourceDocument &d : documents_)
    info[d.id] = assess::SourceInfo{d.source_type, d.access_class};
  return [info = std::move(info)](const std::string &id)
             -> std::optional<assess::SourceInfo> {
    auto it = info.find(id);
    if (it == info.end()) return std::nullopt;
    return it->second;
  };
}

}  // namespace factscout
