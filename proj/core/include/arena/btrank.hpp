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

#ifndef ARENA_AUDIT_CORE_BTRANK_HPP_
#define ARENA_AUDIT_CORE_BTRANK_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "arena/prefdata.hpp"

namespace arena {

// Empirical pairwise win probabilities with ties split half to each side.
// Cells with no battles are absent (battle_count 0, win_prob unset).
class WinMatrix {
 public:
  WinMatrix() = default;
  WinMatrix(std::vector<ModelId> roster, std::vector<double> win_prob,
            std::vector<int64_t> battle_count);

  const std::vector<ModelId>& roster() const { return roster_; }
  size_t num_models() const { return roster_.size(); }

  int64_t battle_count(size_t i, size_t j) const {
    return battle_count_[i * roster_.size() + j];
  }
  // Win probability of roster[i] over roster[j]; nullopt for absent cells.
  std::optional<double> win_prob(size_t i, size_t j) const;

 private:
  std::vector<ModelId> roster_;
  std::vector<double> win_prob_;
  std::vector<int64_t> battle_count_;
};

WinMatrix ComputeWinMatrix(const PreferenceDataset& dataset);

// Fitted Bradley-Terry coefficients, anchored to zero mean.
struct BtScores {
  static constexpr const char* kAnchoring = "zero-mean";

  std::vector<ModelId> roster;
  std::vector<double> score;

  double ScoreOf(const ModelId& id) const;
};

struct FitOptions {
  // L2 penalty weight on the per-battle-normalized objective
  //   J(s) = (1/N) * log-likelihood(s) - lambda * sum_i s_i^2,
  // so that shrinkage strength is independent of dataset size.
  double regularization = 1e-4;
  // Convergence threshold on the objective improvement per iteration.
  double tolerance = 1e-8;
  int max_iterations = 10000;
};

struct FitResult {
  BtScores scores;
  int iterations = 0;
  double final_grad_norm = 0.0;
  bool converged = false;
  // Objective value after each iteration (non-decreasing by construction).
  std::vector<double> objective_trace;
};

// Maximum-likelihood fit of the tie-split Bradley-Terry model (each tie
// counts as half a win for both sides) with L2 regularization. Damped Newton
// ascent with backtracking line search, so the objective trace is monotone.
// Throws ValidationError if some roster model has no battles, ComputeError on
// non-convergence (message carries the final gradient norm).
FitResult FitBradleyTerry(const PreferenceDataset& dataset,
                          const FitOptions& options = {});

struct LeaderboardRow {
  int rank = 0;  // 1-based
  ModelId model;
  double score = 0.0;
  // 2.5th-97.5th percentile of bootstrap ranks, when computed.
  std::optional<std::pair<int, int>> rank_interval;
};

// Models sorted by score descending; ties broken by model name ascending.
struct Leaderboard {
  std::vector<LeaderboardRow> rows;

  int RankOf(const ModelId& id) const;  // throws if absent
};

Leaderboard MakeLeaderboard(const BtScores& scores);

struct BootstrapResult {
  Leaderboard board;  // point fit on the full dataset, intervals attached
  // Resamples in which a model vanished and therefore contributed no rank
  // sample for it (the resample is refit on the surviving roster).
  std::map<ModelId, int> skipped;
  int resamples = 0;
};

// Record-level bootstrap: resample records with replacement (same size),
// refit, record each model's rank. Per-resample seeds are derived from
// (seed, resample index), so results are independent of execution order.
BootstrapResult BootstrapRanks(const PreferenceDataset& dataset, int resamples,
                               uint64_t seed, const FitOptions& options = {});

struct RankShift {
  ModelId model;
  int base_rank = 0;
  int new_rank = 0;
  int delta = 0;  // base_rank - new_rank; positive = moved up
};

// Per-model rank changes between two leaderboards over the same roster,
// ordered by base rank.
struct RankDisplacement {
  std::vector<RankShift> shifts;

  const RankShift& Of(const ModelId& id) const;  // throws if absent
};

RankDisplacement ComputeDisplacement(const Leaderboard& base,
                                     const Leaderboard& other);

}  // namespace arena

#endif  // ARENA_AUDIT_CORE_BTRANK_HPP_
