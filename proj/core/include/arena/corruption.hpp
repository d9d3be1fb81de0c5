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

#ifndef ARENA_AUDIT_CORE_CORRUPTION_HPP_
#define ARENA_AUDIT_CORE_CORRUPTION_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "arena/btrank.hpp"
#include "arena/prefdata.hpp"

namespace arena {

enum class CorruptionMode : uint8_t {
  kApathetic,         // relabel a random subset with uniform random labels
  kAdversarialFlip,   // relabel a random subset in favor of the target
  kAdversarialInject  // append new target-favoring battles
};

const char* ToString(CorruptionMode mode);
CorruptionMode CorruptionModeFromString(const std::string& name);

// Probabilities with which the attacker's detector recognizes outputs:
// tpr = P(target output recognized), tnr = P(non-target output rejected).
struct DetectorQualitySpec {
  double tpr = 1.0;
  double tnr = 1.0;
};

struct CorruptionSpec {
  CorruptionMode mode = CorruptionMode::kApathetic;
  double rate_percent = 0.0;  // r in [0, 100]
  std::optional<ModelId> target;  // required for adversarial modes
  DetectorQualitySpec detector;
  // Optional extension: also vote against these models whenever they appear
  // opposite a side the attacker did not already upvote.
  std::vector<ModelId> downvote_competitors;
  uint64_t seed = 0;

  void Validate(const PreferenceDataset& dataset) const;
};

// Replaces the labels of a uniformly random floor(r*N/100)-subset of records
// with uniform draws over {LeftWins, RightWins, Tie} (possibly equal to the
// original label) and marks them provenance=apathetic. All other fields and
// the record order are untouched. Deterministic given the seed; r=0 is the
// bit-exact identity.
PreferenceDataset CorruptApathetic(const PreferenceDataset& dataset, double r,
                                   uint64_t seed);

// Adversarial corruption per `spec`:
//  - flip: within a random r%-subset, each record is put through the
//    detector; the side identified as the target gets the vote. The true
//    target side fires with probability tpr; each non-target side falsely
//    fires with probability (1 - tnr), checked left then right. Unrecognized
//    battles stay unchanged.
//  - inject: appends floor(r*N/100) records pitting the target against a
//    uniformly random other model, with the same detector treatment (an
//    injected battle where nothing fires is cast as Tie).
// Records the attacker actually voted on are marked provenance=adversarial.
PreferenceDataset CorruptAdversarial(const PreferenceDataset& dataset,
                                     const CorruptionSpec& spec);

// Dispatches to the mode named in spec.
PreferenceDataset Corrupt(const PreferenceDataset& dataset,
                          const CorruptionSpec& spec);

struct ModelDisplacementStats {
  ModelId model;
  int base_rank = 0;
  double median_delta = 0.0;
  int min_delta = 0;
  int max_delta = 0;
  double frac_abs_ge5 = 0.0;  // fraction of trials with |delta| >= 5
};

// Rank-change statistics over repeated corrupt-and-refit trials.
struct DisplacementSummary {
  std::vector<ModelDisplacementStats> per_model;  // ordered by base rank
  int trials = 0;
  int aborted_trials = 0;  // trials whose refit failed
  // deltas[m][t]: delta of per_model[m] in successful trial t.
  std::vector<std::vector<int>> deltas;
};

// Runs `trials` independent corruption trials: per-trial seed derived from
// (spec.seed, trial index), corrupt, refit, rank displacement against the
// uncorrupted baseline leaderboard. Trials run in parallel; aggregation is
// order-independent.
DisplacementSummary RunDisplacementExperiment(const PreferenceDataset& dataset,
                                              const CorruptionSpec& spec,
                                              int trials,
                                              const FitOptions& options = {});

}  // namespace arena

#endif  // ARENA_AUDIT_CORE_CORRUPTION_HPP_
