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

// Line labelling for tables: a linear-chain model over per-row boolean
// features, decoded with Viterbi and trained with an averaged structured
// perceptron, plus resolution of data cells to their header paths.

#pragma once

#include <array>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "factscout/docmodel.h"
#include "factscout/ingest.h"

namespace factscout::tablelabel {

using ingest::TableGrid;

// Enum order is the tie-break order.
enum class LineLabel { kColumnHeader, kRowHeaderLine, kData, kNote };
inline constexpr int kNumLabels = 4;
inline constexpr LineLabel kAllLabels[] = {
    LineLabel::kColumnHeader, LineLabel::kRowHeaderLine, LineLabel::kData,
    LineLabel::kNote};

std::string_view to_string(LineLabel label);
LineLabel parse_line_label(std::string_view name);

enum Feature {
  kIsFirstRow,
  kAllCellsAlpha,
  kMajorityNumeric,
  kHasThFlag,
  kHasSpanningCell,
  kFirstCellEmpty,
  kRowShorterThanMode,
  kNumFeatures,
};

std::string_view feature_name(int feature);

using FeatureVector = std::array<bool, kNumFeatures>;

// A grid expanded to a rectangle: every (row, column) slot holds the text of
// the cell covering it. `origin` is true only in the top-left slot of a cell.
struct RectGrid {
  size_t rows = 0;
  size_t cols = 0;
  std::vector<std::vector<std::string>> text;
  std::vector<std::vector<bool>> origin;
  // Per row: distinct non-empty cells covering the row (a spanning cell
  // counts once), whether any covering cell is a th, and whether any cell
  // starting in the row spans more than one slot.
  std::vector<size_t> cell_count;
  std::vector<bool> has_th;
  std::vector<bool> has_span;
};

RectGrid rectangularize(const TableGrid &grid);

// Throws kEmptyGrid.
std::vector<FeatureVector> featurize(const TableGrid &grid);
std::vector<FeatureVector> featurize(const RectGrid &rect);

struct LabelerModel {
  // weight[feature][label]; a feature fires with value 1 when true.
  std::array<std::array<double, kNumLabels>, kNumFeatures> feature_weights{};
  // transition[prev][next].
  std::array<std::array<double, kNumLabels>, kNumLabels> transition_weights{};

  // Loads {"feature_weights": {"IS_FIRST_ROW": {"COLUMN_HEADER": 2.0, ...}},
  //        "transition_weights": {"COLUMN_HEADER": {"DATA": 1.0, ...}}}.
  // Unknown feature names are ignored; non-finite weights are rejected.
  static LabelerModel from_json(const json &j);
  static LabelerModel load(const std::string &path);
  static const LabelerModel &builtin();
  json to_json() const;

  double emission(const FeatureVector &f, int label) const;
};

// Total score of `labels` for `features`.
double sequence_score(const std::vector<FeatureVector> &features,
                      const std::vector<LineLabel> &labels,
                      const LabelerModel &model);

// Highest-scoring label sequence; among equal scores the lexicographically
// smallest under enum order. Throws kEmptyGrid.
std::vector<LineLabel> viterbi_label(const std::vector<FeatureVector> &features,
                                     const LabelerModel &model);
std::vector<LineLabel> viterbi_label(const TableGrid &grid,
                                     const LabelerModel &model);

struct TrainingExample {
  TableGrid grid;
  std::vector<LineLabel> labels;
};

void to_json(json &j, const TrainingExample &e);
void from_json(const json &j, TrainingExample &e);

// Fraction of rows labelled correctly by `model`.
double training_accuracy(const std::vector<TrainingExample> &examples,
                         const LabelerModel &model);

// Averaged structured perceptron. Returns whichever of the averaged
// weights, final weights and zero model scores best on the training set,
// so the result never does worse than the zero model. Throws
// kEmptyTrainingSet, kLabelMismatch, or kInvalidValue for epochs < 1.
LabelerModel train_labeler(const std::vector<TrainingExample> &examples,
                           int epochs);

struct ResolvedCell {
  size_t row = 0;
  size_t col = 0;
  std::vector<std::string> row_header_path;
  std::vector<std::string> col_header_path;
  std::string value_text;

  friend bool operator==(const ResolvedCell &, const ResolvedCell &) = default;
};

void to_json(json &j, const ResolvedCell &c);
void from_json(const json &j, ResolvedCell &c);

// Number of leftmost columns that act as row headers: the longest leading
// run of columns whose DATA-row cells are at least 80% non-numeric (years
// count as labels), always leaving one value column.
size_t row_header_columns(const RectGrid &rect,
                          const std::vector<LineLabel> &labels);

// One cell per (DATA row, non-row-header column). Throws kLabelMismatch or
// kNoDataRows.
std::vector<ResolvedCell> resolve_cells(const TableGrid &grid,
                                        const std::vector<LineLabel> &labels);

}  // namespace factscout::tablelabel
