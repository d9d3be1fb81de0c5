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

#include "arena/corruption.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "arena/rng.hpp"
#include "parallel.hpp"

namespace arena {
namespace {

size_t CorruptionCount(double rate_percent, size_t n) {
  return static_cast<size_t>(
      std::floor(rate_percent * static_cast<double>(n) / 100.0));
}

bool Contains(const std::vector<ModelId>& ids, const ModelId& id) {
  return std::find(ids.begin(), ids.end(), id) != ids.end();
}

// Simulates the attacker's per-side detector on one battle and applies the
// vote. The target side fires with probability tpr; non-target sides falsely
// fire with probability (1 - tnr), checked left then right. Returns true if a
// vote was cast.
bool ApplyAttackerVote(PreferenceRecord& record, const ModelId& target,
                       const DetectorQualitySpec& detector,
                       const std::vector<ModelId>& downvote, Rng& rng) {
  const bool target_left = record.left == target;
  const bool target_right = record.right == target;
  if (target_left || target_right) {
    if (rng.NextBernoulli(detector.tpr)) {
      record.label = target_left ? VoteLabel::kLeftWins : VoteLabel::kRightWins;
      return true;
    }
  }
  // False fires on non-target sides.
  if (!target_left && rng.NextBernoulli(1.0 - detector.tnr)) {
    record.label = VoteLabel::kLeftWins;
    return true;
  }
  if (!target_right && rng.NextBernoulli(1.0 - detector.tnr)) {
    record.label = VoteLabel::kRightWins;
    return true;
  }
  // Optional extension: vote against competitor models.
  if (!downvote.empty()) {
    const bool left_down = Contains(downvote, record.left);
    const bool right_down = Contains(downvote, record.right);
    if (left_down && right_down) {
      record.label = VoteLabel::kTie;
      return true;
    }
    if (left_down) {
      record.label = VoteLabel::kRightWins;
      return true;
    }
    if (right_down) {
      record.label = VoteLabel::kLeftWins;
      return true;
    }
  }
  return false;
}

}  // namespace

const char* ToString(CorruptionMode mode) {
  switch (mode) {
    case CorruptionMode::kApathetic: return "apathetic";
    case CorruptionMode::kAdversarialFlip: return "adversarial_flip";
    case CorruptionMode::kAdversarialInject: return "adversarial_inject";
  }
  return "apathetic";
}

CorruptionMode CorruptionModeFromString(const std::string& name) {
  if (name == "apathetic") return CorruptionMode::kApathetic;
  if (name == "adversarial_flip") return CorruptionMode::kAdversarialFlip;
  if (name == "adversarial_inject") return CorruptionMode::kAdversarialInject;
  throw ValidationError("unknown corruption mode '" + name + "'");
}

void CorruptionSpec::Validate(const PreferenceDataset& dataset) const {
  if (!(rate_percent >= 0.0 && rate_percent <= 100.0))
    throw ValidationError("corruption rate must be in [0, 100]");
  if (!(detector.tpr >= 0.0 && detector.tpr <= 1.0 && detector.tnr >= 0.0 &&
        detector.tnr <= 1.0))
    throw ValidationError("detector tpr/tnr must be in [0, 1]");
  if (mode != CorruptionMode::kApathetic) {
    if (!target)
      throw ValidationError("adversarial corruption requires a target model");
    if (dataset.IndexOf(*target) < 0)
      throw ValidationError("target model '" + target->str() +
                            "' not in roster");
  }
  for (const auto& id : downvote_competitors) {
    if (dataset.IndexOf(id) < 0)
      throw ValidationError("competitor '" + id.str() + "' not in roster");
  }
}

PreferenceDataset CorruptApathetic(const PreferenceDataset& dataset, double r,
                                   uint64_t seed) {
  if (!(r >= 0.0 && r <= 100.0))
    throw ValidationError("corruption rate must be in [0, 100]");
  const size_t count = CorruptionCount(r, dataset.size());
  if (count == 0) return dataset;

  Rng rng(seed);
  const auto chosen = rng.SampleIndices(dataset.size(), count);
  std::vector<PreferenceRecord> records = dataset.records();
  for (size_t idx : chosen) {
    switch (rng.NextIndex(3)) {
      case 0: records[idx].label = VoteLabel::kLeftWins; break;
      case 1: records[idx].label = VoteLabel::kRightWins; break;
      default: records[idx].label = VoteLabel::kTie; break;
    }
    records[idx].provenance = Provenance::kApathetic;
  }
  return PreferenceDataset(dataset.roster(), std::move(records));
}

PreferenceDataset CorruptAdversarial(const PreferenceDataset& dataset,
                                     const CorruptionSpec& spec) {
  if (spec.mode == CorruptionMode::kApathetic)
    throw ValidationError("CorruptAdversarial requires an adversarial mode");
  spec.Validate(dataset);

  const size_t count = CorruptionCount(spec.rate_percent, dataset.size());
  if (count == 0) return dataset;

  Rng rng(spec.seed);
  std::vector<PreferenceRecord> records = dataset.records();

  if (spec.mode == CorruptionMode::kAdversarialFlip) {
    const auto chosen = rng.SampleIndices(dataset.size(), count);
    for (size_t idx : chosen) {
      if (ApplyAttackerVote(records[idx], *spec.target, spec.detector,
                            spec.downvote_competitors, rng)) {
        records[idx].provenance = Provenance::kAdversarial;
      }
    }
  } else {
    const auto& roster = dataset.roster();
    const size_t target_index = dataset.IndexOf(*spec.target);
    records.reserve(records.size() + count);
    for (size_t b = 0; b < count; ++b) {
      size_t opponent = rng.NextIndex(roster.size() - 1);
      if (opponent >= target_index) ++opponent;

      PreferenceRecord record;
      if (rng.NextBernoulli(0.5)) {
        record.left = *spec.target;
        record.right = roster[opponent];
      } else {
        record.left = roster[opponent];
        record.right = *spec.target;
      }
      // An injected battle where nothing fires is cast as a tie.
      record.label = VoteLabel::kTie;
      ApplyAttackerVote(record, *spec.target, spec.detector,
                        spec.downvote_competitors, rng);
      record.provenance = Provenance::kAdversarial;
      records.push_back(std::move(record));
    }
  }
  return PreferenceDataset(dataset.roster(), std::move(records));
}

PreferenceDataset Corrupt(const PreferenceDataset& dataset,
                          const CorruptionSpec& spec) {
  if (spec.mode == CorruptionMode::kApathetic)
    return CorruptApathetic(dataset, spec.rate_percent, spec.seed);
  return CorruptAdversarial(dataset, spec);
}

DisplacementSummary RunDisplacementExperiment(const PreferenceDataset& dataset,
                                              const CorruptionSpec& spec,
                                              int trials,
                                              const FitOptions& options) {
  if (trials < 1) throw ValidationError("trials must be >= 1");
  spec.Validate(dataset);

  const Leaderboard baseline =
      MakeLeaderboard(FitBradleyTerry(dataset, options).scores);
  const size_t k = baseline.rows.size();

  // deltas_by_trial[t][m]: delta of baseline row m in trial t; INT_MIN marks
  // an aborted trial.
  constexpr int kAborted = std::numeric_limits<int>::min();
  std::vector<std::vector<int>> deltas_by_trial(
      trials, std::vector<int>(k, kAborted));
  internal::ParallelFor(static_cast<size_t>(trials), [&](size_t t) {
    CorruptionSpec trial_spec = spec;
    trial_spec.seed = DeriveSeed(spec.seed, t);
    const auto corrupted = Corrupt(dataset, trial_spec);
    Leaderboard board;
    try {
      board = MakeLeaderboard(FitBradleyTerry(corrupted, options).scores);
    } catch (const ComputeError&) {
      return;  // aborted trial, reported in the summary
    }
    const auto displacement = ComputeDisplacement(baseline, board);
    for (size_t m = 0; m < k; ++m)
      deltas_by_trial[t][m] = displacement.shifts[m].delta;
  });

  DisplacementSummary summary;
  summary.trials = trials;
  summary.deltas.assign(k, {});
  for (int t = 0; t < trials; ++t) {
    if (deltas_by_trial[t][0] == kAborted) {
      ++summary.aborted_trials;
      continue;
    }
    for (size_t m = 0; m < k; ++m)
      summary.deltas[m].push_back(deltas_by_trial[t][m]);
  }
  if (summary.aborted_trials == trials)
    throw ComputeError("all corruption trials failed to refit");

  for (size_t m = 0; m < k; ++m) {
    ModelDisplacementStats stats;
    stats.model = baseline.rows[m].model;
    stats.base_rank = baseline.rows[m].rank;
    std::vector<int> sorted = summary.deltas[m];
    std::sort(sorted.begin(), sorted.end());
    const size_t mid = sorted.size() / 2;
    stats.median_delta = sorted.size() % 2 == 1
                             ? sorted[mid]
                             : 0.5 * (sorted[mid - 1] + sorted[mid]);
    stats.min_delta = sorted.front();
    stats.max_delta = sorted.back();
    int big = 0;
    for (int d : sorted)
      if (std::abs(d) >= 5) ++big;
    stats.frac_abs_ge5 = static_cast<double>(big) / sorted.size();
    summary.per_model.push_back(std::move(stats));
  }
  return summary;
}

}  // namespace arena
