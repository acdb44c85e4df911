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

// The fixture corpus manifest and the scripted refinements run against it.

#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "factscout/repository.h"

namespace factscout::corpus {

inline std::string slurp(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoFailure, "cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Ingest requests for every manifest entry, payloads loaded from `dir`.
inline std::vector<IngestRequest> manifest_requests(const std::string &dir) {
  std::vector<IngestRequest> out;
  for (const json &e : json::parse(slurp(dir + "/manifest.json"))) {
    IngestRequest r;
    r.id = e.at("id").get<std::string>();
    r.uri = e.at("uri").get<std::string>();
    r.type = parse_source_type(e.at("type").get<std::string>());
    r.access = parse_access_class(e.value("access_class", "OPEN"));
    if (e.contains("title")) r.title = e["title"].get<std::string>();
    r.payload = slurp(dir + "/" + e.at("file").get<std::string>());
    out.push_back(std::move(r));
  }
  return out;
}

// Initializes a repository at `root`, ingests the manifest and extracts.
inline ExtractionResult build_repository(const std::string &root, const std::string &dir) {
  Repository::init(root);
  Repository repo = Repository::open(root);
  for (const IngestRequest &r : manifest_requests(dir)) ingest_source(repo, r);
  return extract_repository(repo);
}

struct ScriptedRefinement {
  std::string indicator;
  std::string keyword;
  std::string expected_unit;  // unit id that must reach rank 1
};

inline const std::vector<ScriptedRefinement> kScripted = {
    {"Cotton exports", "million tonnes", "D3:s0:0"},
    {"Cotton stubble", "%", "D4:s1:0"},
    {"Irrigated planted area", "ha", "D2:s0:0"}};

}  // namespace factscout::corpus
