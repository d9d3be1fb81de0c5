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

#include "arena/prefdata.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

#include "arena/rng.hpp"
#include "csv.hpp"
#include "nlohmann/json.hpp"

namespace arena {
namespace {

using nlohmann::json;

bool IsSpace(char c) { return std::isspace(static_cast<unsigned char>(c)); }

VoteLabel WinnerFromString(const std::string& winner, const std::string& path,
                           int line) {
  if (winner == "model_a") return VoteLabel::kLeftWins;
  if (winner == "model_b") return VoteLabel::kRightWins;
  if (winner == "tie") return VoteLabel::kTie;
  throw ParseError(path, line, "unknown winner value '" + winner + "'");
}

Provenance ProvenanceFromString(const std::string& name,
                                const std::string& path, int line) {
  if (name == "organic") return Provenance::kOrganic;
  if (name == "apathetic") return Provenance::kApathetic;
  if (name == "adversarial") return Provenance::kAdversarial;
  throw ParseError(path, line, "unknown provenance '" + name + "'");
}

PreferenceDataset LoadCanonicalJsonl(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open dataset file: " + path);

  std::vector<PreferenceRecord> records;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json row;
    try {
      row = json::parse(line);
    } catch (const json::parse_error& e) {
      throw ParseError(path, line_no, std::string("invalid JSON: ") + e.what());
    }
    if (!row.is_object())
      throw ParseError(path, line_no, "expected a JSON object");
    for (const char* key : {"model_a", "model_b", "winner"}) {
      if (!row.contains(key) || !row[key].is_string())
        throw ParseError(path, line_no,
                         std::string("missing or non-string key '") + key +
                             "'");
    }

    PreferenceRecord record;
    try {
      record.left = ModelId(row["model_a"].get<std::string>());
      record.right = ModelId(row["model_b"].get<std::string>());
    } catch (const ValidationError& e) {
      throw ParseError(path, line_no, e.what());
    }
    if (record.left == record.right)
      throw ParseError(path, line_no,
                       "model_a equals model_b ('" + record.left.str() + "')");
    record.label = WinnerFromString(row["winner"].get<std::string>(), path,
                                    line_no);
    if (row.contains("prompt")) record.prompt = row["prompt"].get<std::string>();
    if (row.contains("response_a"))
      record.response_left = row["response_a"].get<std::string>();
    if (row.contains("response_b"))
      record.response_right = row["response_b"].get<std::string>();
    if (row.contains("provenance"))
      record.provenance = ProvenanceFromString(
          row["provenance"].get<std::string>(), path, line_no);
    records.push_back(std::move(record));
  }
  return PreferenceDataset::FromRecords(std::move(records));
}

int RequiredColumn(const std::vector<std::string>& header,
                   const std::string& name, const std::string& path) {
  auto it = std::find(header.begin(), header.end(), name);
  if (it == header.end())
    throw ValidationError(path + ": missing required column '" + name + "'");
  return static_cast<int>(it - header.begin());
}

int OptionalColumn(const std::vector<std::string>& header,
                   const std::string& name) {
  auto it = std::find(header.begin(), header.end(), name);
  return it == header.end() ? -1 : static_cast<int>(it - header.begin());
}

int ParseIndicator(const std::string& cell, const std::string& path,
                   int line, const std::string& column) {
  std::string trimmed = cell;
  while (!trimmed.empty() && IsSpace(trimmed.back())) trimmed.pop_back();
  size_t start = 0;
  while (start < trimmed.size() && IsSpace(trimmed[start])) ++start;
  trimmed = trimmed.substr(start);
  if (trimmed == "0") return 0;
  if (trimmed == "1") return 1;
  throw ParseError(path, line,
                   "column '" + column + "' must be a 0/1 indicator, got '" +
                       cell + "'");
}

PreferenceDataset LoadLmsys55kCsv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open dataset file: " + path);

  int line = 0;
  auto header = internal::ReadCsvRecord(in, line);
  if (!header) throw ValidationError(path + ": empty file");

  const int col_a = RequiredColumn(*header, "model_a", path);
  const int col_b = RequiredColumn(*header, "model_b", path);
  const int col_wa = RequiredColumn(*header, "winner_model_a", path);
  const int col_wb = RequiredColumn(*header, "winner_model_b", path);
  const int col_tie = RequiredColumn(*header, "winner_tie", path);
  const int col_prompt = OptionalColumn(*header, "prompt");
  const int col_ra = OptionalColumn(*header, "response_a");
  const int col_rb = OptionalColumn(*header, "response_b");
  const int width = static_cast<int>(header->size());

  std::vector<PreferenceRecord> records;
  while (auto row = internal::ReadCsvRecord(in, line)) {
    if (row->size() == 1 && (*row)[0].empty()) continue;  // blank line
    if (static_cast<int>(row->size()) != width)
      throw ParseError(path, line,
                       "expected " + std::to_string(width) + " fields, got " +
                           std::to_string(row->size()));

    const int wins_a = ParseIndicator((*row)[col_wa], path, line,
                                      "winner_model_a");
    const int wins_b = ParseIndicator((*row)[col_wb], path, line,
                                      "winner_model_b");
    const int tie = ParseIndicator((*row)[col_tie], path, line, "winner_tie");
    if (wins_a + wins_b + tie != 1)
      throw ParseError(path, line,
                       "exactly one of winner_model_a/winner_model_b/"
                       "winner_tie must be 1");

    PreferenceRecord record;
    try {
      record.left = ModelId((*row)[col_a]);
      record.right = ModelId((*row)[col_b]);
    } catch (const ValidationError& e) {
      throw ParseError(path, line, e.what());
    }
    if (record.left == record.right)
      throw ParseError(path, line,
                       "model_a equals model_b ('" + record.left.str() + "')");
    record.label = wins_a ? VoteLabel::kLeftWins
                          : (wins_b ? VoteLabel::kRightWins : VoteLabel::kTie);
    if (col_prompt >= 0 && !(*row)[col_prompt].empty())
      record.prompt = (*row)[col_prompt];
    if (col_ra >= 0 && !(*row)[col_ra].empty())
      record.response_left = (*row)[col_ra];
    if (col_rb >= 0 && !(*row)[col_rb].empty())
      record.response_right = (*row)[col_rb];
    records.push_back(std::move(record));
  }
  return PreferenceDataset::FromRecords(std::move(records));
}

}  // namespace

ModelId::ModelId(std::string name) : name_(std::move(name)) {
  if (name_.empty()) throw ValidationError("model id must be non-empty");
  if (IsSpace(name_.front()) || IsSpace(name_.back()))
    throw ValidationError("model id '" + name_ +
                          "' has leading or trailing whitespace");
}

const char* ToString(VoteLabel label) {
  switch (label) {
    case VoteLabel::kLeftWins: return "model_a";
    case VoteLabel::kRightWins: return "model_b";
    case VoteLabel::kTie: return "tie";
  }
  return "tie";
}

const char* ToString(Provenance provenance) {
  switch (provenance) {
    case Provenance::kOrganic: return "organic";
    case Provenance::kApathetic: return "apathetic";
    case Provenance::kAdversarial: return "adversarial";
  }
  return "organic";
}

PreferenceDataset::PreferenceDataset(std::vector<ModelId> roster,
                                     std::vector<PreferenceRecord> records)
    : roster_(std::move(roster)), records_(std::move(records)) {
  index_.reserve(roster_.size());
  for (size_t i = 0; i < roster_.size(); ++i) {
    if (!index_.emplace(roster_[i].str(), static_cast<int>(i)).second)
      throw ValidationError("duplicate roster model '" + roster_[i].str() +
                            "'");
  }
  for (size_t i = 0; i < records_.size(); ++i) {
    const auto& r = records_[i];
    if (r.left == r.right)
      throw ValidationError("record " + std::to_string(i) +
                            ": left equals right ('" + r.left.str() + "')");
    if (IndexOf(r.left) < 0)
      throw ValidationError("record " + std::to_string(i) + ": model '" +
                            r.left.str() + "' not in roster");
    if (IndexOf(r.right) < 0)
      throw ValidationError("record " + std::to_string(i) + ": model '" +
                            r.right.str() + "' not in roster");
  }
}

PreferenceDataset PreferenceDataset::FromRecords(
    std::vector<PreferenceRecord> records) {
  std::vector<ModelId> roster;
  std::unordered_map<std::string, int> seen;
  for (const auto& r : records) {
    for (const ModelId* id : {&r.left, &r.right}) {
      if (seen.emplace(id->str(), static_cast<int>(roster.size())).second)
        roster.push_back(*id);
    }
  }
  return PreferenceDataset(std::move(roster), std::move(records));
}

int PreferenceDataset::IndexOf(const ModelId& id) const {
  auto it = index_.find(id.str());
  return it == index_.end() ? -1 : it->second;
}

PreferenceDataset LoadDataset(const std::string& path, DatasetFormat format) {
  switch (format) {
    case DatasetFormat::kCanonicalJsonl: return LoadCanonicalJsonl(path);
    case DatasetFormat::kLmsys55kCsv: return LoadLmsys55kCsv(path);
  }
  throw ValidationError("unknown dataset format");
}

std::string DatasetToJsonl(const PreferenceDataset& dataset) {
  std::string out;
  for (const auto& r : dataset.records()) {
    json row;
    row["model_a"] = r.left.str();
    row["model_b"] = r.right.str();
    row["winner"] = ToString(r.label);
    if (r.prompt) row["prompt"] = *r.prompt;
    if (r.response_left) row["response_a"] = *r.response_left;
    if (r.response_right) row["response_b"] = *r.response_right;
    if (r.provenance != Provenance::kOrganic)
      row["provenance"] = ToString(r.provenance);
    out += row.dump();
    out += '\n';
  }
  return out;
}

void SaveDatasetJsonl(const PreferenceDataset& dataset,
                      const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot open for writing: " + path);
  out << DatasetToJsonl(dataset);
  if (!out) throw ValidationError("write failed: " + path);
}

void GroundTruthModelSpec::Validate() const {
  if (true_scores.size() < 2)
    throw ValidationError("synthetic spec needs at least 2 models");
  if (!(tie_probability >= 0.0 && tie_probability < 1.0))
    throw ValidationError("tie_probability must be in [0, 1)");
  std::unordered_map<std::string, int> seen;
  for (const auto& [id, score] : true_scores) {
    if (!std::isfinite(score))
      throw ValidationError("true score of '" + id.str() + "' is not finite");
    if (!seen.emplace(id.str(), 1).second)
      throw ValidationError("duplicate model '" + id.str() +
                            "' in synthetic spec");
  }
}

PreferenceDataset GenerateSynthetic(const GroundTruthModelSpec& spec, size_t n,
                                    uint64_t seed) {
  spec.Validate();
  if (n < 1) throw ValidationError("battle count must be >= 1");

  const size_t k = spec.true_scores.size();
  const size_t num_pairs = k * (k - 1) / 2;
  Rng rng(seed);

  std::vector<PreferenceRecord> records;
  records.reserve(n);
  for (size_t b = 0; b < n; ++b) {
    // Unordered pair index -> (i, j), i < j.
    size_t flat = rng.NextIndex(num_pairs);
    size_t i = 0;
    size_t row_len = k - 1;
    while (flat >= row_len) {
      flat -= row_len;
      ++i;
      --row_len;
    }
    size_t j = i + 1 + flat;
    if (rng.NextBernoulli(0.5)) std::swap(i, j);

    PreferenceRecord record;
    record.left = spec.true_scores[i].first;
    record.right = spec.true_scores[j].first;
    if (spec.tie_probability > 0.0 && rng.NextBernoulli(spec.tie_probability)) {
      record.label = VoteLabel::kTie;
    } else {
      const double diff = spec.true_scores[i].second - spec.true_scores[j].second;
      const double p_left = 1.0 / (1.0 + std::exp(-diff));
      record.label =
          rng.NextBernoulli(p_left) ? VoteLabel::kLeftWins : VoteLabel::kRightWins;
    }
    records.push_back(std::move(record));
  }

  std::vector<ModelId> roster;
  roster.reserve(k);
  for (const auto& [id, score] : spec.true_scores) roster.push_back(id);
  return PreferenceDataset(std::move(roster), std::move(records));
}

}  // namespace arena
