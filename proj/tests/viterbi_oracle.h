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

// Exhaustive line-label decoder and random grid and model generators.

#pragma once

#include <random>
#include <string>
#include <vector>

#include "factscout/tablelabel.h"

namespace factscout::tablelabel::oracle {

// Score computed directly from the weight tables.
inline double score(const std::vector<FeatureVector> &f, const std::vector<int> &y,
                    const LabelerModel &m) {
  double s = 0;
  for (size_t i = 0; i < f.size(); ++i) {
    for (int k = 0; k < kNumFeatures; ++k)
      if (f[i][k]) s += m.feature_weights[k][y[i]];
    if (i) s += m.transition_weights[y[i - 1]][y[i]];
  }
  return s;
}

// Enumerates all 4^n sequences in lexicographic order and keeps the first
// maximum, which is the lexicographically smallest optimal sequence.
inline std::vector<LineLabel> brute_force(const std::vector<FeatureVector> &f,
                                          const LabelerModel &m) {
  const size_t n = f.size();
  size_t total = 1;
  for (size_t i = 0; i < n; ++i) total *= kNumLabels;
  std::vector<int> best;
  double best_score = 0;
  for (size_t code = 0; code < total; ++code) {
    std::vector<int> y(n);
    size_t c = code;
    for (size_t i = n; i-- > 0;) {
      y[i] = static_cast<int>(c % kNumLabels);
      c /= kNumLabels;
    }
    double s = score(f, y, m);
    if (best.empty() || s > best_score) {
      best = y;
      best_score = s;
    }
  }
  std::vector<LineLabel> out;
  for (int v : best) out.push_back(static_cast<LineLabel>(v));
  return out;
}

// Weights are multiples of 1/4 in [-2, 2], so every sequence score is exact
// and ties are real ties.
inline LabelerModel random_model(std::mt19937 &rng) {
  std::uniform_int_distribution<int> q(-8, 8);
  LabelerModel m;
  for (auto &row : m.feature_weights)
    for (double &w : row) w = q(rng) / 4.0;
  for (auto &row : m.transition_weights)
    for (double &w : row) w = q(rng) / 4.0;
  return m;
}

inline ingest::TableGrid random_grid(std::mt19937 &rng, int max_rows) {
  static const std::vector<std::string> kCells = {
      "", "Year", "Area (ha)", "2016", "1,518", "NSW", "Production", "12%", "$3.4",
      "Note: survey"};
  auto pick = [&rng](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  ingest::TableGrid g;
  g.doc_id = "T";
  int rows = pick(1, max_rows);
  bool decorated = pick(0, 1);
  for (int r = 0; r < rows; ++r) {
    int cols = pick(1, 4);
    std::vector<std::string> row;
    std::vector<ingest::CellSpan> spans;
    std::vector<ingest::CellEmphasis> emphasis;
    for (int c = 0; c < cols; ++c) {
      row.push_back(kCells[static_cast<size_t>(pick(0, static_cast<int>(kCells.size()) - 1))]);
      spans.push_back({1, pick(0, 4) == 0 ? 2 : 1});
      emphasis.push_back({pick(0, 3) == 0, false});
    }
    g.rows.push_back(row);
    if (decorated) {
      g.cell_spans.push_back(spans);
      g.emphasis.push_back(emphasis);
    }
  }
  return g;
}

}  // namespace factscout::tablelabel::oracle
