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

// Acceptance checks. Prints one PASS or FAIL line per criterion and exits
// nonzero when any criterion fails.

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "bm25_oracle.h"
#include "corpus_util.h"
#include "factscout/assess.h"
#include "factscout/nlp.h"
#include "factscout/query.h"
#include "factscout/repository.h"
#include "factscout/tablelabel.h"
#include "golden_tables.h"
#include "viterbi_oracle.h"

namespace factscout {
namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

const std::string kFixtures = FACTSCOUT_FIXTURE_DIR;
const std::string kCli = FACTSCOUT_CLI_PATH;

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

class ScratchDir {
 public:
  ScratchDir() {
    static std::mt19937_64 rng(std::random_device{}());
    path_ = fs::temp_directory_path() / ("factscout-acceptance-" + std::to_string(rng()));
    fs::create_directories(path_);
  }
  ~ScratchDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  std::string str() const { return path_.string(); }
  std::string operator/(const std::string &name) const { return (path_ / name).string(); }

 private:
  fs::path path_;
};

Outcome hectares_sentence() {
  Sentence s;
  s.doc_id = "D";
  s.text = "The average hectares planted per participant increased slightly 1,518 hectares.";
  nlp::chunk_extract(s);  // load the built-in grammar and gazetteer once
  std::vector<double> micros;
  std::vector<ExtractionRecord> records;
  for (int i = 0; i < 201; ++i) {
    auto start = Clock::now();
    records = nlp::chunk_extract(s);
    micros.push_back(seconds_since(start) * 1e6);
  }
  std::sort(micros.begin(), micros.end());
  double median = micros[micros.size() / 2];
  bool exact = records.size() == 1 && records[0].indicator_phrase == "planted per participant" &&
               records[0].value == *Decimal::parse("1518") && records[0].unit == "hectares";
  std::ostringstream d;
  d << "triple ";
  if (records.empty()) {
    d << "missing";
  } else {
    d << "(" << records[0].indicator_phrase << ", " << records[0].value.to_string() << ", "
      << records[0].unit << ")";
  }
  d << ", median " << median << " us, max " << micros.back() << " us";
  return {exact && median < 1000.0, d.str()};
}

Outcome golden_tables() {
  size_t checked = 0;
  std::vector<std::string> failures = golden::check_golden_cells(&checked);
  std::string d = std::to_string(checked - failures.size()) + "/" + std::to_string(checked) +
                  " unambiguous cells match";
  if (!failures.empty()) d += "; first mismatch: " + failures.front();
  return {failures.empty(), d};
}

Outcome refinement_improvement() {
  ScratchDir dir;
  ExtractionResult extracted = corpus::build_repository(dir.str(), kFixtures + "/corpus");
  std::set<SourceType> types;
  for (const auto &u : extracted.units) types.insert(u.source_type);
  Repository repo = Repository::open(dir.str());
  index::Index idx = load_index(repo);
  query::Ledger ledger;
  bool ok = extracted.units.size() >= 30 && types.size() == 3;
  std::ostringstream d;
  d << extracted.units.size() << " units over " << types.size() << " types";
  for (const auto &s : corpus::kScripted) {
    RefineResult base = refine(idx, ledger, {s.indicator, {}, std::nullopt, false, ""}, 10);
    RefineResult more = refine(idx, ledger, {s.indicator, {s.keyword}, std::nullopt, true, ""}, 10);
    bool top = !more.run.hits.empty() && more.run.hits[0].unit_id == s.expected_unit;
    ok = ok && more.run.top_raw_score > base.run.top_raw_score && top;
    d << "; " << s.indicator << " " << base.run.top_raw_score << " -> "
      << more.run.top_raw_score << (top ? " (rank 1 ok)" : " (wrong rank 1)");
  }
  return {ok, d.str()};
}

Outcome bm25_oracle() {
  std::vector<std::string> failures = index::oracle::check_random_corpora(200, 2026);
  index::Index idx;
  index::IndexedUnit a, b;
  a.unit_id = "u1";
  a.doc_id = b.doc_id = "D";
  a.text = "cotton";
  b.unit_id = "u2";
  b.text = "wheat";
  idx.add_unit(a);
  idx.add_unit(b);
  // One term, tf 1, field length equal to the average: the tf factor is
  // (k1 + 1) / (1 + k1) = 1, so the score is the idf ln(1 + 1.5 / 1.5).
  auto hits = idx.search({"cotton"}, std::nullopt, 10);
  double got = hits.empty() ? 0.0 : hits[0].score.raw;
  double err = std::abs(got - std::log(2.0));
  std::ostringstream d;
  d << (200 - failures.size()) << "/200 instances match the linear scan; ln 2 error " << err;
  if (!failures.empty()) d << "; " << failures.front();
  return {failures.empty() && err <= 1e-9, d.str()};
}

Outcome viterbi_oracle() {
  std::mt19937 rng(41);
  int matches = 0;
  auto start = Clock::now();
  for (int i = 0; i < 100; ++i) {
    tablelabel::LabelerModel m = tablelabel::oracle::random_model(rng);
    ingest::TableGrid g = tablelabel::oracle::random_grid(rng, 6);
    auto got = tablelabel::viterbi_label(g, m);
    matches += got == tablelabel::oracle::brute_force(tablelabel::featurize(g), m);
  }
  double secs = seconds_since(start);
  std::ostringstream d;
  d << matches << "/100 grids match exhaustive search, " << secs << " s including the search";
  return {matches == 100 && secs < 1.0, d.str()};
}

Outcome table_resolution() {
  std::string dir = kFixtures + "/tables";
  ingest::TableGrid g =
      json::parse(corpus::slurp(dir + "/stacked_header.json")).get<ingest::TableGrid>();
  json expected = json::parse(corpus::slurp(dir + "/stacked_header.expected.json"));
  auto labels = tablelabel::viterbi_label(g, tablelabel::LabelerModel::builtin());
  json label_names = json::array();
  for (auto l : labels) label_names.push_back(tablelabel::to_string(l));
  json cells = tablelabel::resolve_cells(g, labels);
  bool ok = label_names == expected["labels"] && cells == expected["cells"];
  return {ok, std::to_string(cells.size()) + " cells, labels " + label_names.dump()};
}

Outcome report_shape() {
  ScratchDir dir;
  fs::copy_file(kFixtures + "/report/ledger.jsonl", dir / "ledger.jsonl");
  query::Ledger ledger(dir / "ledger.jsonl");
  std::map<std::string, assess::SourceInfo> sources;
  for (const json &s : json::parse(corpus::slurp(kFixtures + "/report/sources.json")))
    sources[s.at("id")] = {parse_source_type(s.at("type").get<std::string>()),
                           parse_access_class(s.at("access_class").get<std::string>())};
  auto lookup = [&sources](const std::string &id) -> std::optional<assess::SourceInfo> {
    auto it = sources.find(id);
    if (it == sources.end()) return std::nullopt;
    return it->second;
  };
  assess::IndicatorReport report = assess::build_report(ledger.records(), lookup);
  bool ok = report.rows.size() == 10 && report.totals.size() == 5;
  int sum = 0;
  bool unknown = false;
  for (size_t i = 0; i + 1 < report.totals.size(); ++i) {
    const auto &t = report.totals[i];
    sum += t.total;
    ok = ok && t.achieved + t.relevant + t.not_achieved == t.total;
    if (t.data_type == "Unknown") unknown = t.total > 0 && t.not_achieved == t.total;
  }
  ok = ok && sum == 10 && report.totals.back().total == 10 && unknown;
  std::string d = assess::totals_csv(report);
  std::replace(d.begin(), d.end(), '\n', ';');
  return {ok, d};
}

int run_shell(const std::string &cmd) {
  int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string quote(const std::string &s) {
  std::string out = "'";
  for (char c : s) out += c == '\'' ? std::string("'\\''") : std::string(1, c);
  return out + "'";
}

// Runs the whole workflow through the CLI binary in a fresh repository and
// returns the concatenated command output followed by the persisted files.
std::optional<std::string> cli_workflow(const std::string &root, double *secs) {
  const std::string corpus = kFixtures + "/corpus";
  const std::string log = root + "/transcript.txt";
  const std::string repo = root + "/repo";
  std::vector<std::string> cmds;
  for (const json &e : json::parse(corpus::slurp(corpus + "/manifest.json"))) {
    std::string c = "ingest --type " + e.at("type").get<std::string>() + " --uri " +
                    quote(e.at("uri")) + " --access " + e.at("access_class").get<std::string>() +
                    " --id " + e.at("id").get<std::string>();
    if (e.contains("title")) c += " --title " + quote(e["title"]);
    cmds.push_back(c + " " + quote(corpus + "/" + e.at("file").get<std::string>()));
  }
  cmds.push_back("extract");
  for (const auto &s : corpus::kScripted) {
    cmds.push_back("search " + quote(s.indicator));
    cmds.push_back("search " + quote(s.indicator) + " -k " + quote(s.keyword));
    cmds.push_back("refine " + quote(s.indicator));
    cmds.push_back("refine " + quote(s.indicator) + " -k " + quote(s.keyword) + " --achieved");
  }
  cmds.push_back("refine 'Cotton stubble' -k % --source D4 --achieved");
  cmds.push_back("refine 'Soil carbon'");
  cmds.push_back("report --format csv");
  cmds.push_back("report --format totals-csv");
  cmds.push_back("report --format json");

  auto start = Clock::now();
  for (const std::string &c : cmds) {
    std::string sub = c.substr(0, c.find(' '));
    std::string rest = c.substr(sub.size());
    std::string line = kCli + " " + sub + " --repo " + quote(repo) + rest + " >> " + quote(log) +
                       " 2>&1";
    if (run_shell("echo " + quote("$ " + c) + " >> " + quote(log)) != 0) return std::nullopt;
    if (run_shell(line) != 0) {
      std::cerr << "command failed: " << c << "\n" << corpus::slurp(log);
      return std::nullopt;
    }
  }
  *secs = seconds_since(start);
  std::string all = corpus::slurp(log);
  for (const char *name : {"documents.jsonl", "sentences.jsonl", "tables.jsonl",
                           "extractions.jsonl", "index.json", "ledger.jsonl"})
    all += std::string("\n== ") + name + "\n" + corpus::slurp(repo + "/" + name);
  return all;
}

Outcome end_to_end() {
  ScratchDir first, second;
  double t1 = 0, t2 = 0;
  std::optional<std::string> a = cli_workflow(first.str(), &t1);
  std::optional<std::string> b = cli_workflow(second.str(), &t2);
  if (!a || !b) return {false, "a CLI step failed"};
  bool same = *a == *b;
  bool has_report = a->find("S.No,Indicator") != std::string::npos &&
                    a->find("Total,4,") != std::string::npos;
  std::ostringstream d;
  d << "runs took " << t1 << " s and " << t2 << " s; " << a->size() << " bytes "
    << (same ? "identical" : "differ") << (has_report ? "" : "; report missing");
  return {same && has_report && t1 < 10.0 && t2 < 10.0, d.str()};
}

}  // namespace
}  // namespace factscout

int main() {
  using factscout::Outcome;
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"hectares sentence triple (exact, < 1 ms)", factscout::hectares_sentence},
      {"rating table golden cells", factscout::golden_tables},
      {"refinement improvement on fixture corpus", factscout::refinement_improvement},
      {"BM25 linear-scan oracle and ln 2 score", factscout::bm25_oracle},
      {"Viterbi exhaustive oracle (< 1 s)", factscout::viterbi_oracle},
      {"stacked-header table resolution", factscout::table_resolution},
      {"report totals shape with Unknown bucket", factscout::report_shape},
      {"end-to-end CLI workflow (< 10 s, deterministic)", factscout::end_to_end},
  };
  int failed = 0;
  for (const auto &[name, check] : criteria) {
    Outcome o;
    try {
      o = check();
    } catch (const std::exception &e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << "  " << name << "  [" << o.detail << "]"
              << std::endl;
  }
  return failed == 0 ? 0 : 1;
}
