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

#ifndef ARENA_AUDIT_CORE_ATTRIBUTION_HPP_
#define ARENA_AUDIT_CORE_ATTRIBUTION_HPP_

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "arena/prefdata.hpp"
#include "arena/rng.hpp"

// Deciding whether an output sequence was sampled from a candidate model, by
// counting how many of its tokens fall inside the model's minimal top-p cover
// at each step. A step's token is in the cover S* (the smallest set of
// highest-probability tokens with cumulative mass >= p) iff the total mass of
// tokens ranked strictly before it is < p. Among equal-probability tokens the
// realized token is ordered first, which makes membership deterministic and
// never penalizes a genuine sample.

namespace arena {

// Anything that can produce a full next-token distribution given a prefix.
class TokenModel {
 public:
  virtual ~TokenModel() = default;

  virtual int vocab_size() const = 0;

  // Probability distribution over the whole vocabulary for the next token.
  // Sums to 1 within 1e-9; all entries >= 0.
  virtual std::vector<double> Distribution(
      std::span<const int> prefix) const = 0;
};

// One decision step of a trace: the realized token's probability under the
// candidate model and the total probability of tokens ranked strictly before
// it in the favorable descending order.
struct TokenStepTrace {
  int step = 0;  // 1-based
  double realized_token_prob = 0.0;
  double cum_prob_above = 0.0;

  friend bool operator==(const TokenStepTrace&,
                         const TokenStepTrace&) = default;
};

struct SequenceTrace {
  std::vector<TokenStepTrace> steps;
  std::optional<ModelId> true_source;  // set for labeled evaluation data

  size_t length() const { return steps.size(); }
  void Validate() const;

  friend bool operator==(const SequenceTrace&, const SequenceTrace&) = default;
};

struct AttributionParams {
  double p = 0.9;  // probability threshold, in (0, 1]
  double t = 0.8;  // decision threshold, in [0, 1]

  void Validate() const;
};

struct AttributionResult {
  double confidence = 0.0;  // fraction of steps inside the top-p cover
  int decision = 0;         // 1 iff confidence >= t
};

// Teacher-forces `output` through the model and records per-step evidence.
// Throws ValidationError if the output is empty or a token is outside the
// vocabulary.
SequenceTrace TraceSequence(const TokenModel& model,
                            std::span<const int> prompt,
                            std::span<const int> output);

AttributionResult Attribute(const SequenceTrace& trace,
                            const AttributionParams& params);

struct DetectorQuality {
  double tpr = 0.0;         // fraction of target-sourced traces accepted
  double tnr = 0.0;         // fraction of other traces rejected
  double mean_tokens = 0.0; // mean trace length over all evaluated traces
};

// Evaluates the detector on labeled traces. Requires at least one trace with
// true_source == target and one with a different source.
DetectorQuality EvaluateDetector(const std::vector<SequenceTrace>& traces,
                                 const ModelId& target,
                                 const AttributionParams& params);

struct SweepEntry {
  AttributionParams params;
  DetectorQuality quality;
};

// Full quality table over a (p, t) grid, in grid order (p major, t minor).
std::vector<SweepEntry> SweepDetector(const std::vector<SequenceTrace>& traces,
                                      const ModelId& target,
                                      std::span<const double> p_grid,
                                      std::span<const double> t_grid);

// Character-level n-gram model with add-k smoothing. Tokens are ids into a
// fixed character vocabulary; every vocabulary token has probability > 0 at
// every step (k > 0), and unseen contexts fall back to the uniform
// distribution.
class NgramModel : public TokenModel {
 public:
  // vocabulary: defaults to the distinct characters of the corpus; pass an
  // explicit superset when models must share an alphabet.
  NgramModel(const std::string& corpus, int order, double smoothing_k,
             std::optional<std::string> vocabulary = std::nullopt);

  int vocab_size() const override { return static_cast<int>(alphabet_.size()); }
  int order() const { return order_; }

  std::vector<double> Distribution(std::span<const int> prefix) const override;

  // Character <-> token id mapping. Encode throws ValidationError on a
  // character outside the vocabulary.
  std::vector<int> Encode(const std::string& text) const;
  std::string Decode(std::span<const int> tokens) const;

  struct Sample {
    std::vector<int> tokens;
    double total_log_prob = 0.0;  // log-probability under the full distribution
  };

  // Samples `length` tokens after `prompt` with top-p truncation (the minimal
  // descending-order cover with mass >= top_p, renormalized) at the given
  // temperature. Deterministic given the Rng state.
  Sample SampleSequence(std::span<const int> prompt, int length, double top_p,
                        double temperature, Rng& rng) const;

 private:
  struct ContextStats {
    std::vector<double> prob;       // smoothed, full vocabulary
    std::vector<int> by_prob_desc;  // token ids, prob descending, id ascending
    std::vector<double> cum_desc;   // cumulative mass along by_prob_desc
  };

  const ContextStats& StatsFor(std::span<const int> prefix) const;

  int order_;
  double smoothing_k_;
  std::string alphabet_;                       // sorted distinct characters
  std::unordered_map<char, int> char_to_id_;
  std::unordered_map<std::string, ContextStats> contexts_;
  ContextStats uniform_;  // fallback for unseen contexts
};

// Trains a character n-gram model. Throws ValidationError on an empty corpus
// or order < 1 or smoothing_k <= 0.
std::shared_ptr<NgramModel> TrainNgramModel(const std::string& corpus,
                                            int order, double smoothing_k);

// Trace files: one JSON object per line with keys "steps" (array of
// [realized_token_prob, cum_prob_above] pairs) and optional "true_source".
std::vector<SequenceTrace> LoadTraces(const std::string& path);
void SaveTraces(const std::vector<SequenceTrace>& traces,
                const std::string& path);

}  // namespace arena

#endif  // ARENA_AUDIT_CORE_ATTRIBUTION_HPP_
