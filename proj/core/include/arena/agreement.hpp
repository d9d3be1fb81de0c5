// Copyright 2026 The Arena Audit Authors.
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

#ifndef ARENA_AUDIT_CORE_AGREEMENT_HPP_
#define ARENA_AUDIT_CORE_AGREEMENT_HPP_

#include <map>
#include <string>
#include <vector>

namespace arena {

// Items x categories count table: counts[i][j] is the number of annotators
// assigning item i to category j. Every row sums to the same number of
// annotators n >= 2.
struct RatingsMatrix {
  std::vector<std::string> categories;
  std::vector<std::vector<int>> counts;
  int annotators_per_item = 0;

  void Validate() const;
};

// Fleiss' Kappa: (P_bar - P_e) / (1 - P_e), where P_bar is the mean per-item
// pairwise agreement and P_e the chance agreement from the overall category
// proportions. Returns a value in [-1, 1]; throws ValidationError when all
// mass sits in one category (P_e = 1, kappa undefined).
double FleissKappa(const RatingsMatrix& matrix);

// Loads a delimited ratings file with header columns item_id, annotator_id,
// dimension, category and builds one RatingsMatrix per dimension (items and
// categories ordered lexicographically). Every item within a dimension must
// be rated exactly once by each of that dimension's annotators.
std::map<std::string, RatingsMatrix> LoadRatings(const std::string& path);

}  // namespace arena

#endif  // ARENA_AUDIT_CORE_AGREEMENT_HPP_
