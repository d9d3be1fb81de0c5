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

#ifndef ARENA_AUDIT_CORE_PREFDATA_HPP_
#define ARENA_AUDIT_CORE_PREFDATA_HPP_

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "arena/errors.hpp"

namespace arena {

// Identifier of a model on the leaderboard roster. Non-empty, no
// leading/trailing whitespace.
class ModelId {
 public:
  ModelId() = default;
  explicit ModelId(std::string name);

  const std::string& str() const { return name_; }
  bool empty() const { return name_.empty(); }

  friend bool operator==(const ModelId&, const ModelId&) = default;
  friend std::strong_ordering operator<=>(const ModelId&,
                                          const ModelId&) = default;

 private:
  std::string name_;
};

enum class VoteLabel : uint8_t { kLeftWins, kRightWins, kTie };

enum class Provenance : uint8_t { kOrganic, kApathetic, kAdversarial };

const char* ToString(VoteLabel label);
const char* ToString(Provenance provenance);

// A single battle: two model outputs shown side by side plus the user's vote.
struct PreferenceRecord {
  ModelId left;
  ModelId right;
  VoteLabel label = VoteLabel::kTie;
  std::optional<std::string> prompt;
  std::optional<std::string> response_left;
  std::optional<std::string> response_right;
  Provenance provenance = Provenance::kOrganic;

  friend bool operator==(const PreferenceRecord&,
                         const PreferenceRecord&) = default;
};

// An immutable, index-addressable collection of battles over a fixed roster.
// Record order is stable so that corruption experiments can address records
// by index reproducibly.
class PreferenceDataset {
 public:
  PreferenceDataset() = default;

  // Validates that every record references roster models and left != right.
  PreferenceDataset(std::vector<ModelId> roster,
                    std::vector<PreferenceRecord> records);

  // Derives the roster from the records, in order of first appearance.
  static PreferenceDataset FromRecords(std::vector<PreferenceRecord> records);

  const std::vector<ModelId>& roster() const { return roster_; }
  const std::vector<PreferenceRecord>& records() const { return records_; }
  size_t size() const { return records_.size(); }

  // Index of a model in the roster, or -1 if absent.
  int IndexOf(const ModelId& id) const;

  friend bool operator==(const PreferenceDataset&,
                         const PreferenceDataset&) = default;

 private:
  std::vector<ModelId> roster_;
  std::vector<PreferenceRecord> records_;
  std::unordered_map<std::string, int> index_;
};

enum class DatasetFormat : uint8_t {
  kCanonicalJsonl,  // one JSON object per line: model_a, model_b, winner, ...
  kLmsys55kCsv,     // released 55k-style CSV with 0/1 winner indicator columns
};

// Loads and validates a battle dataset. The roster is the set of model ids
// observed, in order of first appearance.
PreferenceDataset LoadDataset(const std::string& path, DatasetFormat format);

// Writes a dataset in the canonical JSONL format. Reloading yields a dataset
// equal field-by-field.
void SaveDatasetJsonl(const PreferenceDataset& dataset,
                      const std::string& path);
std::string DatasetToJsonl(const PreferenceDataset& dataset);

// Ground truth used by the synthetic battle generator: latched log-strengths
// plus one global tie probability.
struct GroundTruthModelSpec {
  std::vector<std::pair<ModelId, double>> true_scores;
  double tie_probability = 0.0;

  void Validate() const;
};

// Samples `n` battles: an unordered model pair uniformly at random (random
// orientation), Tie with probability tie_probability, otherwise the left
// model wins with probability exp(sL) / (exp(sL) + exp(sR)). Deterministic
// given the seed.
PreferenceDataset GenerateSynthetic(const GroundTruthModelSpec& spec, size_t n,
                                    uint64_t seed);

}  // namespace arena

#endif  // ARENA_AUDIT_CORE_PREFDATA_HPP_
