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

#include <filesystem>
#include <set>

#include "corpus_util.h"
#include "factscout/repository.h"
#include "test_util.h"

namespace factscout {
namespace {

const std::string kCorpus = testing::fixture_path("corpus");

TEST(RepositoryTest, InitOpenAndVersion) {
  testing::TempDir dir;
  std::string root = dir / "repo";
  EXPECT_FALSE(Repository::exists(root));
  Repository::init(root);
  EXPECT_TRUE(Repository::exists(root));
  EXPECT_ERROR_CODE(Repository::init(root), ErrorCode::kInvalidValue);
  Repository repo = Repository::open(root);
  EXPECT_TRUE(repo.documents().empty());
  EXPECT_EQ(repo.config().search_limit, 10u);

  testing::write_text(root + "/REPO_VERSION", "factscout-repository 0\n");
  EXPECT_ERROR_CODE(Repository::open(root), ErrorCode::kRepositoryVersion);
  EXPECT_ERROR_CODE(Repository::open(dir / "nothing"), ErrorCode::kRepositoryVersion);
}

TEST(RepositoryTest, IngestPersistsAndRejectsDuplicates) {
  testing::TempDir dir;
  Repository::init(dir.path());
  Repository repo = Repository::open(dir.path());
  IngestRequest r;
  r.uri = "https://example.org/a";
  r.payload = "<title>Cotton</title><p>Area was 1,518 hectares.</p>";
  SourceDocument doc = ingest_source(repo, r);
  EXPECT_EQ(doc.title, "Cotton");
  EXPECT_EQ(doc.access_class, AccessClass::kOpen);
  EXPECT_EQ(doc.id[0], 'D');
  EXPECT_EQ(repo.read_payload(doc), r.payload);
  EXPECT_ERROR_CODE(ingest_source(repo, r), ErrorCode::kDuplicateId);

  IngestRequest blank;
  EXPECT_ERROR_CODE(ingest_source(repo, blank), ErrorCode::kMissingField);
  IngestRequest bad = r;
  bad.id = "X";
  bad.type = SourceType::kPdfText;
  bad.payload = "";
  EXPECT_ERROR_CODE(ingest_source(repo, bad), ErrorCode::kEmptySidecar);

  Repository again = Repository::open(dir.path());
  ASSERT_EQ(again.documents().size(), 1u);
  EXPECT_EQ(again.documents()[0], doc);
  EXPECT_EQ(again.sentences().size(), 1u);
}

TEST(RepositoryTest, MissingPayloadIsDetected) {
  testing::TempDir dir;
  Repository::init(dir.path());
  Repository repo = Repository::open(dir.path());
  IngestRequest r;
  r.id = "D1";
  r.uri = "u";
  r.payload = "<p>x</p>";
  SourceDocument doc = ingest_source(repo, r);
  std::filesystem::remove(dir.path() + "/" + doc.payload_ref);
  EXPECT_ERROR_CODE(Repository::open(dir.path()), ErrorCode::kMissingPayload);
}

TEST(RepositoryTest, CorpusCoversEveryTypeWithEnoughUnits) {
  testing::TempDir dir;
  ExtractionResult result = corpus::build_repository(dir.path(), kCorpus);
  EXPECT_GE(result.units.size(), 30u);
  std::set<SourceType> types;
  std::set<std::string> ids;
  for (const auto &u : result.units) {
    types.insert(u.source_type);
    EXPECT_TRUE(ids.insert(u.unit_id).second) << u.unit_id;
  }
  EXPECT_EQ(types.size(), 3u);

  Repository repo = Repository::open(dir.path());
  index::Index idx = load_index(repo);
  EXPECT_EQ(idx.size(), result.units.size());
  EXPECT_EQ(idx.sources().size(), 6u);
}

TEST(RepositoryTest, ScriptedRefinementsImprove) {
  testing::TempDir dir;
  corpus::build_repository(dir.path(), kCorpus);
  Repository repo = Repository::open(dir.path());
  index::Index idx = load_index(repo);
  query::Ledger ledger(repo.path("ledger.jsonl"));
  for (const auto &s : corpus::kScripted) {
    RefineResult base = refine(idx, ledger, {s.indicator, {}, std::nullopt, false, ""}, 10);
    RefineResult more =
        refine(idx, ledger, {s.indicator, {s.keyword}, std::nullopt, true, ""}, 10);
    EXPECT_GT(more.run.top_raw_score, base.run.top_raw_score) << s.indicator;
    ASSERT_FALSE(more.run.hits.empty());
    EXPECT_EQ(more.run.hits[0].unit_id, s.expected_unit) << s.indicator;
    EXPECT_EQ(more.record.redefinition_count(), 1);
    EXPECT_TRUE(more.record.steps.back().result_achieved);
    EXPECT_EQ(more.record.steps.back().top_doc_id,
              std::optional<std::string>(more.run.hits[0].doc_id));
  }
  assess::IndicatorReport report =
      assess::build_report(ledger.records(), repo.source_lookup());
  EXPECT_EQ(report.totals.back().total, 3);
  EXPECT_EQ(report.totals.back().achieved, 3);
}

TEST(RepositoryTest, ExtractIsDeterministic) {
  testing::TempDir a, b;
  corpus::build_repository(a.path(), kCorpus);
  corpus::build_repository(b.path(), kCorpus);
  for (const char *name : {"documents.jsonl", "sentences.jsonl", "tables.jsonl",
                           "extractions.jsonl", "index.json"}) {
    EXPECT_EQ(testing::read_text(a / name), testing::read_text(b / name)) << name;
  }
}

TEST(RepositoryTest, HitJsonCarriesUnitFields) {
  testing::TempDir dir;
  corpus::build_repository(dir.path(), kCorpus);
  index::Index idx = load_index(Repository::open(dir.path()));
  query::RunResult run = query::run(query::formulate("Cotton exports", {"million tonnes"}), idx);
  ASSERT_FALSE(run.hits.empty());
  json h = hit_json(run.hits[0], idx, 1);
  EXPECT_EQ(h["rank"], 1);
  EXPECT_EQ(h["unit_id"], "D3:s0:0");
  EXPECT_EQ(h["unit"], "tonnes");
  EXPECT_TRUE(h.contains("indicator"));
}

}  // namespace
}  // namespace factscout
