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

#ifndef ARENA_AUDIT_CORE_ARENASIM_HPP_
#define ARENA_AUDIT_CORE_ARENASIM_HPP_

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "arena/attribution.hpp"
#include "arena/prefdata.hpp"
#include "arena/rng.hpp"

// A mock arena: sample a model pair (optionally up-weighting designated
// models), generate two outputs, collect a vote from either an honest noisy
// voter or an attacker running the attribution detector, and accumulate the
// battles into a dataset ready for ranking.

namespace arena {

enum class FallbackVote : uint8_t { kTie, kAbstain, kRandom };

FallbackVote FallbackVoteFromString(const std::string& name);
const char* ToString(FallbackVote fallback);

struct AttackerConfig {
  ModelId target;
  AttributionParams params;
  FallbackVote fallback = FallbackVote::kTie;
  // Fraction of battles cast by the attacker rather than an honest voter.
  double rate = 1.0;
};

struct ArenaModel {
  ModelId id;
  std::shared_ptr<NgramModel> model;
  double sampling_weight = 1.0;
};

struct GenerationParams {
  int length = 160;
  double top_p = 0.9;
  double temperature = 1.0;
};

struct ArenaConfig {
  std::vector<ArenaModel> models;
  std::optional<AttackerConfig> attacker;
  // Honest voters prefer the output with the higher self-assigned mean token
  // log-probability, mistaken with probability epsilon.
  double honest_epsilon = 0.0;
  std::vector<std::string> prompts;
  GenerationParams generation;
  uint64_t seed = 0;

  void Validate() const;
  const ArenaModel& ModelById(const ModelId& id) const;
};

// Reads a key=value configuration file ('#' comments). Documented keys:
//   models.<id>.corpus     path to the model's training text (required)
//   models.<id>.weight     sampling weight > 0 (default 1)
//   models.<id>.order      n-gram order (default 3)
//   models.<id>.smoothing  add-k smoothing constant (default 0.05)
//   attacker.target        target model id (attacker enabled when present)
//   attacker.p             probability threshold (default 0.9)
//   attacker.t             decision threshold (default 0.8)
//   attacker.fallback      tie | abstain | random (default tie)
//   attacker.rate          fraction of battles the attacker casts (default 1)
//   honest.epsilon         honest-vote error rate in [0, 0.5] (default 0)
//   prompts.file           one prompt per line (optional)
//   prompts.count          derived prompts when no file (default 64)
//   prompts.length         derived prompt length (default 16)
//   gen.length             output length in tokens (default 160)
//   gen.top_p              nucleus sampling threshold (default 0.9)
//   gen.temperature        sampling temperature (default 1.0)
//   seed                   master seed (default 0)
// Corpus and prompt paths are resolved relative to the config file. All
// models are trained over the union alphabet of all corpora so any output can
// be scored under any model.
ArenaConfig LoadArenaConfig(const std::string& path);

struct AttackerStats {
  int64_t battles_seen = 0;
  int64_t target_appearances = 0;
  int64_t votes_cast_for_target = 0;
  int64_t detector_false_fires = 0;
};

struct ArenaOutcome {
  PreferenceDataset battles;
  AttackerStats attacker_stats;
};

// Draws two distinct models without replacement, each draw with probability
// proportional to the sampling weights among the remaining models.
std::pair<ModelId, ModelId> SamplePair(const ArenaConfig& config, Rng& rng);

// Runs the detector on both outputs under the target model; votes for the
// side that uniquely fires, otherwise applies the fallback policy. nullopt
// means abstain.
std::optional<VoteLabel> AttackerVote(const SequenceTrace& left_trace,
                                      const SequenceTrace& right_trace,
                                      const AttributionParams& params,
                                      FallbackVote fallback, Rng& rng);

// Simulates n_battles battles. Abstentions produce no record. Deterministic
// given config and seed.
ArenaOutcome RunArena(const ArenaConfig& config, int64_t n_battles,
                      uint64_t seed);

}  // namespace arena

#endif  // ARENA_AUDIT_CORE_ARENASIM_HPP_
