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

// Hand-transcribed rating tables: score bands, dependence levels and the
// adaptability matrix cells on which every source row agrees.

#pragma once

#include <string>
#include <vector>

#include "factscout/assess.h"

namespace factscout::golden {

struct SuitabilityCell {
  double score;
  char level;
};

// Both ends of each score band.
inline const std::vector<SuitabilityCell> kSuitability = {
    {0.7, 'H'}, {1.0, 'H'}, {0.4, 'M'}, {0.6, 'M'}, {0.0, 'L'}, {0.3, 'L'}};

struct QueryDepCell {
  int redefinitions;
  char level;
};

inline const std::vector<QueryDepCell> kQueryDependence = {{0, 'L'}, {1, 'M'}, {2, 'H'}};

struct DataDepCell {
  AccessClass access;
  bool filter;
  char level;
};

inline const std::vector<DataDepCell> kDataDependence = {
    {AccessClass::kOpen, false, 'L'},
    {AccessClass::kOpen, true, 'M'},
    {AccessClass::kSubscription, true, 'H'}};

struct AdaptabilityCell {
  char query_dep;
  char data_dep;
  char level;
};

// (M, L) and (M, M) are claimed by two rows with different outputs and are
// left out; (M, H) is L in both rows.
inline const std::vector<AdaptabilityCell> kAdaptability = {
    {'L', 'L', 'H'}, {'L', 'M', 'M'}, {'L', 'H', 'L'}, {'M', 'H', 'L'},
    {'H', 'L', 'M'}, {'H', 'M', 'L'}, {'H', 'H', 'L'}};

// Returns a description of every mismatch; empty when all cells agree.
inline std::vector<std::string> check_golden_cells(size_t *checked = nullptr) {
  using namespace assess;
  std::vector<std::string> failures;
  size_t n = 0;
  for (const auto &c : kSuitability) {
    ++n;
    if (level_letter(categorize_suitability(c.score)) != c.level)
      failures.push_back("suitability " + std::to_string(c.score));
  }
  for (const auto &c : kQueryDependence) {
    ++n;
    if (level_letter(query_dependence(c.redefinitions)) != c.level)
      failures.push_back("query dependence " + std::to_string(c.redefinitions));
  }
  for (const auto &c : kDataDependence) {
    ++n;
    if (level_letter(data_dependence(c.access, c.filter)) != c.level)
      failures.push_back("data dependence " + std::string(to_string(c.access)));
  }
  for (const auto &c : kAdaptability) {
    ++n;
    Level got = adaptability(parse_level(std::string(1, c.query_dep)),
                             parse_level(std::string(1, c.data_dep)));
    if (level_letter(got) != c.level)
      failures.push_back(std::string("adaptability ") + c.query_dep + c.data_dep);
  }
  if (checked) *checked = n;
  return failures;
}

}  // namespace factscout::golden
