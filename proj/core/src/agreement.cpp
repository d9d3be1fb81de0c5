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

#include "arena/agreement.hpp"

#include <algorithm>
#include <fstream>
#include <set>

#include "arena/errors.hpp"
#include "csv.hpp"

namespace arena {

void RatingsMatrix::Validate() const {
  if (counts.empty()) throw ValidationError("ratings matrix has no items");
  if (categories.size() < 2)
    throw ValidationError("ratings matrix needs at least 2 categories");
  if (annotators_per_item < 2)
    throw ValidationError("ratings matrix needs at least 2 annotators");
  for (size_t i = 0; i < counts.size(); ++i) {
    if (counts[i].size() != categories.size())
      throw ValidationError("item " + std::to_string(i) +
                            ": category count mismatch");
    int sum = 0;
    for (int c : counts[i]) {
      if (c < 0)
        throw ValidationError("item " + std::to_string(i) +
                              ": negative count");
      sum += c;
    }
    if (sum != annotators_per_item)
      throw ValidationError("item " + std::to_string(i) + ": row sums to " +
                            std::to_string(sum) + ", expected " +
                            std::to_string(annotators_per_item));
  }
}

double FleissKappa(const RatingsMatrix& matrix) {
  matrix.Validate();
  const double n = matrix.annotators_per_item;
  const double items = static_cast<double>(matrix.counts.size());
  const size_t categories = matrix.categories.size();

  double mean_agreement = 0.0;
  std::vector<double> proportion(categories, 0.0);
  for (const auto& row : matrix.counts) {
    double agreement = 0.0;
    for (size_t j = 0; j < categories; ++j) {
      agreement += static_cast<double>(row[j]) * (row[j] - 1);
      proportion[j] += row[j];
    }
    mean_agreement += agreement / (n * (n - 1.0));
  }
  mean_agreement /= items;

  double chance_agreement = 0.0;
  for (double& p : proportion) {
    p /= items * n;
    chance_agreement += p * p;
  }

  if (chance_agreement >= 1.0)
    throw ValidationError(
        "kappa undefined: all ratings fall in a single category");
  return (mean_agreement - chance_agreement) / (1.0 - chance_agreement);
}

std::map<std::string, RatingsMatrix> LoadRatings(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open ratings file: " + path);

  int line = 0;
  auto header = internal::ReadCsvRecord(in, line);
  if (!header) throw ValidationError(path + ": empty file");
  auto column = [&](const std::string& name) {
    auto it = std::find(header->begin(), header->end(), name);
    if (it == header->end())
      throw ValidationError(path + ": missing required column '" + name + "'");
    return static_cast<int>(it - header->begin());
  };
  const int col_item = column("item_id");
  const int col_annotator = column("annotator_id");
  const int col_dimension = column("dimension");
  const int col_category = column("category");

  struct Entry {
    std::string item;
    std::string annotator;
    std::string category;
  };
  std::map<std::string, std::vector<Entry>> by_dimension;
  std::set<std::tuple<std::string, std::string, std::string>> seen;
  while (auto row = internal::ReadCsvRecord(in, line)) {
    if (row->size() == 1 && (*row)[0].empty()) continue;
    if (row->size() != header->size())
      throw ParseError(path, line, "field count mismatch");
    Entry entry{(*row)[col_item], (*row)[col_annotator], (*row)[col_category]};
    const std::string& dimension = (*row)[col_dimension];
    if (entry.item.empty() || entry.annotator.empty() ||
        entry.category.empty() || dimension.empty())
      throw ParseError(path, line, "empty field");
    if (!seen.insert({dimension, entry.item, entry.annotator}).second)
      throw ParseError(path, line,
                       "duplicate rating for (item '" + entry.item +
                           "', annotator '" + entry.annotator +
                           "', dimension '" + dimension + "')");
    by_dimension[dimension].push_back(std::move(entry));
  }
  if (by_dimension.empty()) throw ValidationError(path + ": no ratings");

  std::map<std::string, RatingsMatrix> matrices;
  for (const auto& [dimension, entries] : by_dimension) {
    std::set<std::string> items, categories, annotators;
    for (const auto& e : entries) {
      items.insert(e.item);
      categories.insert(e.category);
      annotators.insert(e.annotator);
    }
    RatingsMatrix matrix;
    matrix.categories.assign(categories.begin(), categories.end());
    matrix.annotators_per_item = static_cast<int>(annotators.size());
    matrix.counts.assign(items.size(),
                         std::vector<int>(matrix.categories.size(), 0));
    std::map<std::string, int> item_index, category_index;
    int idx = 0;
    for (const auto& item : items) item_index[item] = idx++;
    idx = 0;
    for (const auto& category : matrix.categories)
      category_index[category] = idx++;
    for (const auto& e : entries)
      ++matrix.counts[item_index[e.item]][category_index[e.category]];
    try {
      matrix.Validate();
    } catch (const ValidationError& e) {
      throw ValidationError(path + ": dimension '" + dimension +
                            "': " + e.what());
    }
    matrices.emplace(dimension, std::move(matrix));
  }
  return matrices;
}

}  // namespace arena
