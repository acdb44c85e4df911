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

#include "factscout/tablelabel.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "factscout/builtin_resources.h"
#include "factscout/nlp.h"

namespace factscout::tablelabel {

namespace {

constexpr const char *kLabelNames[] = {"COLUMN_HEADER", "ROW_HEADER_LINE",
                                       "DATA", "NOTE"};
constexpr const char *kFeatureNames[] = {
    "IS_FIRST_ROW",      "ALL_CELLS_ALPHA",  "MAJORITY_NUMERIC",
    "HAS_TH_FLAG",       "HAS_SPANNING_CELL", "FIRST_CELL_EMPTY",
    "ROW_SHORTER_THAN_MODE"};

std::string trim(std::string_view s) {
  size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

bool numeric_cell(std::string_view raw) {
  std::string s = trim(raw);
  if (!s.empty() && s[0] == '$') s.erase(0, 1);
  if (!s.empty() && s.back() == '%') s.pop_back();
  return nlp::is_number(trim(s));
}

bool year_cell(std::string_view raw) {
  std::string s = trim(raw);
  if (s.size() != 4 || !std::all_of(s.begin(), s.end(), [](char c) {
        return std::isdigit(static_cast<unsigned char>(c));
      }))
    return false;
  int y = std::stoi(s);
  return y >= 1900 && y <= 2099;
}

bool alpha_cell(std::string_view s) {
  bool letter = false;
  for (char c : s) {
    if (std::isalpha(static_cast<unsigned char>(c))) {
      letter = true;
    } else if (c != ' ') {
      return false;
    }
  }
  return letter;
}

int label_index(LineLabel l) { return static_cast<int>(l); }

}  // namespace

std::string_view to_string(LineLabel label) {
  return kLabelNames[label_index(label)];
}

LineLabel parse_line_label(std::string_view name) {
  for (int i = 0; i < kNumLabels; ++i) {
    if (name == kLabelNames[i]) return static_cast<LineLabel>(i);
  }
  throw Error(ErrorCode::kUnknownEnumValue,
              "unknown line label: " + std::string(name));
}

std::string_view feature_name(int feature) { return kFeatureNames[feature]; }

RectGrid rectangularize(const TableGrid &grid) {
  RectGrid rect;
  rect.rows = grid.rows.size();
  // occupant[r][c] = index of the covering cell in `cells`, or -1.
  struct Placed {
    std::string text;
    bool th;
  };
  std::vector<Placed> cells;
  std::vector<std::vector<int>> occupant(rect.rows);
  rect.has_span.assign(rect.rows, false);

  for (size_t r = 0; r < rect.rows; ++r) {
    size_t c = 0;
    for (size_t k = 0; k < grid.rows[r].size(); ++k) {
      ingest::CellSpan span;
      if (r < grid.cell_spans.size() && k < grid.cell_spans[r].size())
        span = grid.cell_spans[r][k];
      bool th = r < grid.emphasis.size() && k < grid.emphasis[r].size() &&
                grid.emphasis[r][k].is_th;
      while (c < occupant[r].size() && occupant[r][c] >= 0) ++c;
      int id = static_cast<int>(cells.size());
      cells.push_back(Placed{grid.rows[r][k], th});
      if (span.rowspan > 1 || span.colspan > 1) rect.has_span[r] = true;
      size_t last_row = std::min(rect.rows, r + static_cast<size_t>(span.rowspan));
      for (size_t rr = r; rr < last_row; ++rr) {
        auto &row = occupant[rr];
        if (row.size() < c + span.colspan) row.resize(c + span.colspan, -1);
        for (size_t cc = c; cc < c + static_cast<size_t>(span.colspan); ++cc) {
          if (row[cc] < 0) row[cc] = id;
        }
      }
      c += span.colspan;
    }
  }

  for (const auto &row : occupant) rect.cols = std::max(rect.cols, row.size());
  rect.text.assign(rect.rows, std::vector<std::string>(rect.cols));
  rect.origin.assign(rect.rows, std::vector<bool>(rect.cols, false));
  rect.cell_count.assign(rect.rows, 0);
  rect.has_th.assign(rect.rows, false);
  std::set<int> seen_origin;
  for (size_t r = 0; r < rect.rows; ++r) {
    std::set<int> distinct;
    for (size_t c = 0; c < occupant[r].size(); ++c) {
      int id = occupant[r][c];
      if (id < 0) continue;
      rect.text[r][c] = cells[id].text;
      rect.origin[r][c] = seen_origin.insert(id).second;
      if (cells[id].th) rect.has_th[r] = true;
      if (!trim(cells[id].text).empty()) distinct.insert(id);
    }
    rect.cell_count[r] = distinct.size();
  }
  return rect;
}

std::vector<FeatureVector> featurize(const RectGrid &rect) {
  if (rect.rows == 0) throw Error(ErrorCode::kEmptyGrid, "table has no rows");
  std::map<size_t, int> histogram;
  for (size_t n : rect.cell_count) ++histogram[n];
  size_t mode = 0;
  int best = 0;
  for (const auto &[n, count] : histogram) {
    if (count >= best) {  // ties go to the larger count
      best = count;
      mode = n;
    }
  }

  std::vector<FeatureVector> out(rect.rows);
  for (size_t r = 0; r < rect.rows; ++r) {
    FeatureVector &f = out[r];
    f.fill(false);
    size_t non_empty = 0, numeric = 0, alpha = 0;
    for (size_t c = 0; c < rect.cols; ++c) {
      std::string t = trim(rect.text[r][c]);
      if (t.empty()) continue;
      ++non_empty;
      if (numeric_cell(t)) ++numeric;
      if (alpha_cell(t)) ++alpha;
    }
    f[kIsFirstRow] = r == 0;
    f[kAllCellsAlpha] = non_empty > 0 && alpha == non_empty;
    f[kMajorityNumeric] = 2 * numeric > non_empty;
    f[kHasThFlag] = rect.has_th[r];
    f[kHasSpanningCell] = rect.has_span[r];
    f[kFirstCellEmpty] = rect.cols == 0 || trim(rect.text[r][0]).empty();
    f[kRowShorterThanMode] = rect.cell_count[r] < mode;
  }
  return out;
}

std::vector<FeatureVector> featurize(const TableGrid &grid) {
  return featurize(rectangularize(grid));
}

// ---------------------------------------------------------------------------
// Model

LabelerModel LabelerModel::from_json(const json &j) {
  LabelerModel m;
  auto weight = [](const json &v, const std::string &where) {
    if (!v.is_number()) {
      throw Error(ErrorCode::kInvalidValue, "weight is not a number: " + where);
    }
    double w = v.get<double>();
    if (!std::isfinite(w)) {
      throw Error(ErrorCode::kInvalidValue, "weight is not finite: " + where);
    }
    return w;
  };
  if (j.contains("feature_weights")) {
    for (const auto &[fname, labels] : j.at("feature_weights").items()) {
      int f = -1;
      for (int i = 0; i < kNumFeatures; ++i) {
        if (fname == kFeatureNames[i]) f = i;
      }
      if (f < 0) continue;
      for (const auto &[lname, w] : labels.items()) {
        m.feature_weights[f][label_index(parse_line_label(lname))] =
            weight(w, fname + "/" + lname);
      }
    }
  }
  if (j.contains("transition_weights")) {
    for (const auto &[from, row] : j.at("transition_weights").items()) {
      int a = label_index(parse_line_label(from));
      for (const auto &[to, w] : row.items()) {
        m.transition_weights[a][label_index(parse_line_label(to))] =
            weight(w, from + "->" + to);
      }
    }
  }
  return m;
}

LabelerModel LabelerModel::load(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoFailure, "cannot open model: " + path);
  try {
    return from_json(json::parse(in));
  } catch (const json::exception &e) {
    throw Error(ErrorCode::kInvalidValue,
                "model " + path + ": " + std::string(e.what()));
  }
}

const LabelerModel &LabelerModel::builtin() {
  static const LabelerModel m = from_json(json::parse(resources::kLabelerModelJson));
  return m;
}

json LabelerModel::to_json() const {
  json fw = json::object();
  for (int f = 0; f < kNumFeatures; ++f) {
    json row = json::object();
    for (int l = 0; l < kNumLabels; ++l) {
      if (feature_weights[f][l] != 0) row[kLabelNames[l]] = feature_weights[f][l];
    }
    if (!row.empty()) fw[kFeatureNames[f]] = row;
  }
  json tw = json::object();
  for (int a = 0; a < kNumLabels; ++a) {
    json row = json::object();
    for (int b = 0; b < kNumLabels; ++b) {
      if (transition_weights[a][b] != 0) row[kLabelNames[b]] = transition_weights[a][b];
    }
    if (!row.empty()) tw[kLabelNames[a]] = row;
  }
  return json{{"feature_weights", fw}, {"transition_weights", tw}};
}

double LabelerModel::emission(const FeatureVector &f, int label) const {
  double s = 0;
  for (int i = 0; i < kNumFeatures; ++i) {
    if (f[i]) s += feature_weights[i][label];
  }
  return s;
}

double sequence_score(const std::vector<FeatureVector> &features,
                      const std::vector<LineLabel> &labels,
                      const LabelerModel &model) {
  double s = 0;
  for (size_t i = 0; i < features.size(); ++i) {
    int l = label_index(labels[i]);
    s += model.emission(features[i], l);
    if (i > 0) s += model.transition_weights[label_index(labels[i - 1])][l];
  }
  return s;
}

std::vector<LineLabel> viterbi_label(const std::vector<FeatureVector> &features,
                                     const LabelerModel &model) {
  const size_t n = features.size();
  if (n == 0) throw Error(ErrorCode::kEmptyGrid, "table has no rows");
  // suffix[i][l]: best score of rows i..n-1 given row i takes label l.
  // Decoding forwards from these picks the smallest label at each step
  // among those that stay optimal, which yields the lexicographically
  // smallest optimal sequence.
  std::vector<std::array<double, kNumLabels>> suffix(n);
  for (size_t i = n; i-- > 0;) {
    for (int l = 0; l < kNumLabels; ++l) {
      double rest = 0;
      if (i + 1 < n) {
        rest = -INFINITY;
        for (int k = 0; k < kNumLabels; ++k)
          rest = std::max(rest, model.transition_weights[l][k] + suffix[i + 1][k]);
      }
      suffix[i][l] = model.emission(features[i], l) + rest;
    }
  }
  std::vector<LineLabel> out(n);
  int prev = 0;
  for (size_t i = 0; i < n; ++i) {
    auto value = [&](int l) {
      return i == 0 ? suffix[0][l] : model.transition_weights[prev][l] + suffix[i][l];
    };
    int best = 0;
    for (int l = 1; l < kNumLabels; ++l) {
      if (value(l) > value(best)) best = l;
    }
    out[i] = static_cast<LineLabel>(best);
    prev = best;
  }
  return out;
}

std::vector<LineLabel> viterbi_label(const TableGrid &grid,
                                     const LabelerModel &model) {
  return viterbi_label(featurize(grid), model);
}

// ---------------------------------------------------------------------------
// Training

void to_json(json &j, const TrainingExample &e) {
  json labels = json::array();
  for (LineLabel l : e.labels) labels.push_back(to_string(l));
  j = json{{"grid", e.grid}, {"labels", labels}};
}

void from_json(const json &j, TrainingExample &e) {
  e.grid = j.at("grid").get<TableGrid>();
  e.labels.clear();
  for (const json &l : j.at("labels")) {
    e.labels.push_back(parse_line_label(l.get<std::string>()));
  }
}

namespace {

void add_features(LabelerModel &m, const std::vector<FeatureVector> &features,
                  const std::vector<LineLabel> &labels, double sign) {
  for (size_t i = 0; i < features.size(); ++i) {
    int l = label_index(labels[i]);
    for (int f = 0; f < kNumFeatures; ++f) {
      if (features[i][f]) m.feature_weights[f][l] += sign;
    }
    if (i > 0) m.transition_weights[label_index(labels[i - 1])][l] += sign;
  }
}

void accumulate(LabelerModel &sum, const LabelerModel &m) {
  for (int f = 0; f < kNumFeatures; ++f)
    for (int l = 0; l < kNumLabels; ++l)
      sum.feature_weights[f][l] += m.feature_weights[f][l];
  for (int a = 0; a < kNumLabels; ++a)
    for (int b = 0; b < kNumLabels; ++b)
      sum.transition_weights[a][b] += m.transition_weights[a][b];
}

void scale(LabelerModel &m, double factor) {
  for (auto &row : m.feature_weights)
    for (double &w : row) w *= factor;
  for (auto &row : m.transition_weights)
    for (double &w : row) w *= factor;
}

}  // namespace

double training_accuracy(const std::vector<TrainingExample> &examples,
                         const LabelerModel &model) {
  size_t total = 0, correct = 0;
  for (const TrainingExample &e : examples) {
    std::vector<LineLabel> predicted = viterbi_label(e.grid, model);
    for (size_t i = 0; i < predicted.size(); ++i) {
      ++total;
      if (predicted[i] == e.labels[i]) ++correct;
    }
  }
  return total == 0 ? 0.0 : static_cast<double>(correct) / total;
}

LabelerModel train_labeler(const std::vector<TrainingExample> &examples,
                           int epochs) {
  if (examples.empty()) {
    throw Error(ErrorCode::kEmptyTrainingSet, "no training examples");
  }
  if (epochs < 1) throw Error(ErrorCode::kInvalidValue, "epochs must be >= 1");
  std::vector<std::vector<FeatureVector>> features;
  for (const TrainingExample &e : examples) {
    features.push_back(featurize(e.grid));
    if (e.labels.size() != features.back().size()) {
      throw Error(ErrorCode::kLabelMismatch,
                  "label count does not match row count");
    }
  }

  LabelerModel current, sum;
  size_t steps = 0;
  for (int epoch = 0; epoch < epochs; ++epoch) {
    for (size_t k = 0; k < examples.size(); ++k) {
      std::vector<LineLabel> predicted = viterbi_label(features[k], current);
      if (predicted != examples[k].labels) {
        add_features(current, features[k], examples[k].labels, +1);
        add_features(current, features[k], predicted, -1);
      }
      accumulate(sum, current);
      ++steps;
    }
  }
  LabelerModel averaged = sum;
  scale(averaged, 1.0 / static_cast<double>(steps));

  const LabelerModel zero;
  const LabelerModel *best = &averaged;
  double best_acc = training_accuracy(examples, averaged);
  const LabelerModel *candidates[] = {&current, &zero};
  for (const LabelerModel *candidate : candidates) {
    double acc = training_accuracy(examples, *candidate);
    if (acc > best_acc) {
      best_acc = acc;
      best = candidate;
    }
  }
  return *best;
}

// ---------------------------------------------------------------------------
// Resolution

void to_json(json &j, const ResolvedCell &c) {
  j = json{{"row", c.row},
           {"col", c.col},
           {"row_header_path", c.row_header_path},
           {"col_header_path", c.col_header_path},
           {"value_text", c.value_text}};
}

void from_json(const json &j, ResolvedCell &c) {
  c.row = j.value("row", size_t{0});
  c.col = j.value("col", size_t{0});
  c.row_header_path = j.at("row_header_path").get<std::vector<std::string>>();
  c.col_header_path = j.at("col_header_path").get<std::vector<std::string>>();
  c.value_text = j.at("value_text").get<std::string>();
}

size_t row_header_columns(const RectGrid &rect,
                          const std::vector<LineLabel> &labels) {
  size_t run = 0;
  while (run + 1 < rect.cols) {
    size_t non_empty = 0, label_like = 0;
    for (size_t r = 0; r < rect.rows; ++r) {
      if (labels[r] != LineLabel::kData) continue;
      std::string t = trim(rect.text[r][run]);
      if (t.empty()) continue;
      ++non_empty;
      if (!numeric_cell(t) || year_cell(t)) ++label_like;
    }
    if (non_empty == 0 || label_like * 5 < non_empty * 4) break;
    ++run;
  }
  return run;
}

namespace {

void push_collapsed(std::vector<std::string> &path, const std::string &text) {
  std::string t = trim(text);
  if (t.empty() || (!path.empty() && path.back() == t)) return;
  path.push_back(std::move(t));
}

}  // namespace

std::vector<ResolvedCell> resolve_cells(const TableGrid &grid,
                                        const std::vector<LineLabel> &labels) {
  if (labels.size() != grid.rows.size()) {
    throw Error(ErrorCode::kLabelMismatch,
                "label count does not match row count");
  }
  if (std::find(labels.begin(), labels.end(), LineLabel::kData) == labels.end()) {
    throw Error(ErrorCode::kNoDataRows, "table has no DATA rows");
  }
  RectGrid rect = rectangularize(grid);
  size_t header_cols = row_header_columns(rect, labels);

  std::vector<std::vector<std::string>> col_paths(rect.cols);
  for (size_t r = 0; r < rect.rows; ++r) {
    if (labels[r] != LineLabel::kColumnHeader) continue;
    for (size_t c = header_cols; c < rect.cols; ++c)
      push_collapsed(col_paths[c], rect.text[r][c]);
  }

  std::vector<ResolvedCell> out;
  std::vector<std::string> section;
  for (size_t r = 0; r < rect.rows; ++r) {
    if (labels[r] == LineLabel::kRowHeaderLine) {
      section.clear();
      for (size_t c = 0; c < rect.cols; ++c) push_collapsed(section, rect.text[r][c]);
      continue;
    }
    if (labels[r] != LineLabel::kData) continue;
    std::vector<std::string> row_path = section;
    for (size_t c = 0; c < header_cols; ++c) push_collapsed(row_path, rect.text[r][c]);
    for (size_t c = header_cols; c < rect.cols; ++c) {
      out.push_back(ResolvedCell{r, c, row_path, col_paths[c], rect.text[r][c]});
    }
  }
  return out;
}

}  // namespace factscout::tablelabel
