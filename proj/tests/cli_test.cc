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

#include <sys/wait.h>

#include <cstdlib>
#include <sstream>

#include "factscout/cli.h"
#include "factscout/tablelabel.h"
#include "test_util.h"

namespace factscout {
namespace {

struct CliResult {
  int code;
  std::string out;
  std::string err;
};

CliResult cli(std::vector<std::string> args) {
  args.insert(args.begin(), "factscout");
  std::vector<const char *> argv;
  for (const std::string &a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

const std::string kCorpus = testing::fixture_path("corpus");

TEST(CliTest, UsageErrorsExitTwo) {
  EXPECT_EQ(cli({}).code, 2);
  EXPECT_EQ(cli({"frobnicate"}).code, 2);
  EXPECT_EQ(cli({"search"}).code, 2);
  EXPECT_EQ(cli({"ingest", "--uri", "u"}).code, 2);
}

TEST(CliTest, FailuresExitOne) {
  testing::TempDir dir;
  CliResult r = cli({"search", "--repo", dir / "none", "cotton"});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("RepositoryVersion"), std::string::npos) << r.err;

  EXPECT_EQ(cli({"init", "--repo", dir.path()}).code, 0);
  r = cli({"ingest", "--repo", dir.path(), "--type", "DOCX", "--uri", "u", kCorpus + "/D1.html"});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("UnknownSourceType"), std::string::npos);
  r = cli({"report", "--repo", dir.path(), "--format", "xml"});
  EXPECT_NE(r.code, 0);
}

TEST(CliTest, WorkflowInProcess) {
  testing::TempDir dir;
  std::string repo = dir.path();
  ASSERT_EQ(cli({"ingest", "--repo", repo, "--type", "pdf-text", "--uri", "u3", "--id", "D3",
                 "--title", "Cotton trade review", kCorpus + "/D3.jsonl"})
                .code,
            0);
  ASSERT_EQ(cli({"ingest", "--repo", repo, "--type", "html", "--uri", "u1", "--id", "D1",
                 "--access", "source-specific", kCorpus + "/D1.html"})
                .code,
            0);
  CliResult ex = cli({"extract", "--repo", repo});
  ASSERT_EQ(ex.code, 0) << ex.err;
  EXPECT_NE(ex.out.find("indexed units"), std::string::npos);

  CliResult s = cli({"search", "--repo", repo, "Cotton exports", "-k", "million tonnes"});
  ASSERT_EQ(s.code, 0) << s.err;
  EXPECT_EQ(s.out.rfind("rank\traw\tnorm", 0), 0u);
  EXPECT_NE(s.out.find("D3:s0:0"), std::string::npos);

  CliResult sj = cli({"search", "--repo", repo, "Cotton exports", "--json"});
  json hits = json::parse(sj.out);
  EXPECT_FALSE(hits["hits"].empty());

  EXPECT_EQ(cli({"search", "--repo", repo, "zzzz"}).out, "no results\n");
  EXPECT_EQ(cli({"search", "--repo", repo, "cotton", "--source", "D9"}).code, 1);

  ASSERT_EQ(cli({"refine", "--repo", repo, "Cotton exports"}).code, 0);
  CliResult rj = cli({"query", "--repo", repo, "Cotton exports", "-k", "million tonnes",
                      "--mark-achieved", "--json"});
  ASSERT_EQ(rj.code, 0) << rj.err;
  EXPECT_EQ(json::parse(rj.out)["record"]["redefinition_count"], 1);

  CliResult totals = cli({"report", "--repo", repo, "--format", "totals-csv"});
  EXPECT_NE(totals.out.find("PDF,1,1,0,0\n"), std::string::npos) << totals.out;
  ASSERT_EQ(cli({"report", "--repo", repo, "--out", dir / "report.csv"}).code, 0);
  EXPECT_EQ(testing::read_text(dir / "report.csv").rfind("S.No,", 0), 0u);

  ASSERT_EQ(cli({"snapshot", "--repo", repo, "--out", dir / "snap.json"}).code, 0);
  EXPECT_EQ(json::parse(testing::read_text(dir / "snap.json"))["version"], 1);
}

TEST(CliTest, StandaloneExtractAndTablelabel) {
  testing::TempDir dir;
  json sentence = {{"doc_id", "D"},
                   {"ordinal", 0},
                   {"text", "The average hectares planted per participant increased slightly "
                            "1,518 hectares."},
                   {"tokens", json::array()}};
  testing::write_text(dir / "s.jsonl", sentence.dump() + "\n");
  CliResult r = cli({"extract", dir / "s.jsonl"});
  ASSERT_EQ(r.code, 0) << r.err;
  json rec = json::parse(r.out.substr(0, r.out.find('\n')));
  EXPECT_EQ(rec["indicator_phrase"], "planted per participant");
  EXPECT_EQ(rec["value"], "1518");
  EXPECT_EQ(rec["unit"], "hectares");

  CliResult apply = cli({"tablelabel", "apply", testing::fixture_path("tables/stacked_header.json")});
  ASSERT_EQ(apply.code, 0) << apply.err;
  json expected =
      json::parse(testing::read_text(testing::fixture_path("tables/stacked_header.expected.json")));
  json got = json::parse(apply.out);
  EXPECT_EQ(got["labels"], expected["labels"]);
  EXPECT_EQ(got["cells"], expected["cells"]);

  json example = {{"grid", {{"doc_id", "T"}, {"rows", json::array({json::array({"Year", "Area"}), json::array({"2016", "1518"})})}}},
                  {"labels", {"COLUMN_HEADER", "DATA"}}};
  testing::write_text(dir / "train.jsonl", example.dump() + "\n");
  CliResult train = cli({"tablelabel", "train", "--in", dir / "train.jsonl", "--out",
                         dir / "model.json", "--epochs", "3"});
  ASSERT_EQ(train.code, 0) << train.err;
  EXPECT_NO_THROW(tablelabel::LabelerModel::load(dir / "model.json"));
}

TEST(CliTest, BinaryReportsExitCodes) {
  std::string bin = FACTSCOUT_CLI_PATH;
  int status = std::system((bin + " >/dev/null 2>&1").c_str());
  ASSERT_TRUE(WIFEXITED(status));
  EXPECT_EQ(WEXITSTATUS(status), 2);
  status = std::system((bin + " --help >/dev/null 2>&1").c_str());
  EXPECT_EQ(WEXITSTATUS(status), 0);
}

}  // namespace
}  // namespace factscout
