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

#include "arena/attribution.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

#include "nlohmann/json.hpp"

namespace arena {
namespace {

using nlohmann::json;

// Total probability of tokens ranked strictly before `token` in the
// favorable descending order: exactly the mass of strictly-more-probable
// tokens, since equally probable tokens sort after the realized one.
double CumProbAbove(const std::vector<double>& dist, int token) {
  const double p = dist[token];
  double above = 0.0;
  for (double q : dist)
    if (q > p) above += q;
  return above;
}

}  // namespace

void SequenceTrace::Validate() const {
  if (steps.empty()) throw ValidationError("trace has no steps");
  for (const auto& s : steps) {
    if (!(s.realized_token_prob >= 0.0 && s.realized_token_prob <= 1.0))
      throw ValidationError("realized_token_prob outside [0, 1]");
    if (!(s.cum_prob_above >= 0.0 && s.cum_prob_above <= 1.0))
      throw ValidationError("cum_prob_above outside [0, 1]");
    if (s.cum_prob_above + s.realized_token_prob > 1.0 + 1e-9)
      throw ValidationError(
          "cum_prob_above + realized_token_prob exceeds 1");
  }
}

void AttributionParams::Validate() const {
  if (!(p > 0.0 && p <= 1.0))
    throw ValidationError("probability threshold p must be in (0, 1]");
  if (!(t >= 0.0 && t <= 1.0))
    throw ValidationError("decision threshold t must be in [0, 1]");
}

SequenceTrace TraceSequence(const TokenModel& model,
                            std::span<const int> prompt,
                            std::span<const int> output) {
  if (output.empty()) throw ValidationError("output sequence is empty");
  const int vocab = model.vocab_size();
  auto check = [vocab](int token) {
    if (token < 0 || token >= vocab)
      throw ValidationError("token " + std::to_string(token) +
                            " outside vocabulary of size " +
                            std::to_string(vocab));
  };
  for (int token : prompt) check(token);
  for (int token : output) check(token);

  std::vector<int> prefix(prompt.begin(), prompt.end());
  prefix.reserve(prompt.size() + output.size());

  SequenceTrace trace;
  trace.steps.reserve(output.size());
  for (size_t i = 0; i < output.size(); ++i) {
    const auto dist = model.Distribution(prefix);
    TokenStepTrace step;
    step.step = static_cast<int>(i + 1);
    step.realized_token_prob = dist[output[i]];
    step.cum_prob_above = CumProbAbove(dist, output[i]);
    trace.steps.push_back(step);
    prefix.push_back(output[i]);
  }
  return trace;
}

AttributionResult Attribute(const SequenceTrace& trace,
                            const AttributionParams& params) {
  params.Validate();
  trace.Validate();
  size_t in_set = 0;
  for (const auto& step : trace.steps)
    if (step.cum_prob_above < params.p) ++in_set;
  AttributionResult result;
  result.confidence = static_cast<double>(in_set) / trace.steps.size();
  result.decision = result.confidence >= params.t ? 1 : 0;
  return result;
}

DetectorQuality EvaluateDetector(const std::vector<SequenceTrace>& traces,
                                 const ModelId& target,
                                 const AttributionParams& params) {
  params.Validate();
  int64_t positives = 0, true_positives = 0;
  int64_t negatives = 0, true_negatives = 0;
  double total_tokens = 0.0;
  for (const auto& trace : traces) {
    if (!trace.true_source)
      throw ValidationError("detector evaluation requires labeled traces");
    const auto result = Attribute(trace, params);
    total_tokens += static_cast<double>(trace.length());
    if (*trace.true_source == target) {
      ++positives;
      true_positives += result.decision;
    } else {
      ++negatives;
      true_negatives += 1 - result.decision;
    }
  }
  if (positives == 0)
    throw ValidationError("no traces labeled with target '" + target.str() +
                          "'");
  if (negatives == 0)
    throw ValidationError("no traces labeled with a non-target source");

  DetectorQuality quality;
  quality.tpr = static_cast<double>(true_positives) / positives;
  quality.tnr = static_cast<double>(true_negatives) / negatives;
  quality.mean_tokens = total_tokens / static_cast<double>(traces.size());
  return quality;
}

std::vector<SweepEntry> SweepDetector(const std::vector<SequenceTrace>& traces,
                                      const ModelId& target,
                                      std::span<const double> p_grid,
                                      std::span<const double> t_grid) {
  std::vector<SweepEntry> entries;
  entries.reserve(p_grid.size() * t_grid.size());
  for (double p : p_grid) {
    for (double t : t_grid) {
      AttributionParams params{p, t};
      entries.push_back({params, EvaluateDetector(traces, target, params)});
    }
  }
  return entries;
}

NgramModel::NgramModel(const std::string& corpus, int order,
                       double smoothing_k,
                       std::optional<std::string> vocabulary) {
  if (corpus.empty()) throw ValidationError("corpus must be non-empty");
  if (order < 1) throw ValidationError("n-gram order must be >= 1");
  if (!(smoothing_k > 0.0))
    throw ValidationError("smoothing constant must be > 0");
  order_ = order;
  smoothing_k_ = smoothing_k;

  std::set<char> chars(corpus.begin(), corpus.end());
  if (vocabulary) chars.insert(vocabulary->begin(), vocabulary->end());
  alphabet_.assign(chars.begin(), chars.end());
  const int v = static_cast<int>(alphabet_.size());
  for (int i = 0; i < v; ++i) char_to_id_[alphabet_[i]] = i;

  const int m = order_ - 1;
  std::unordered_map<std::string, std::vector<int64_t>> counts;
  for (size_t i = static_cast<size_t>(m); i < corpus.size(); ++i) {
    auto& row = counts[corpus.substr(i - m, m)];
    if (row.empty()) row.assign(v, 0);
    ++row[char_to_id_.at(corpus[i])];
  }

  auto finalize = [&](const std::vector<int64_t>& row) {
    ContextStats stats;
    int64_t total = 0;
    for (int64_t c : row) total += c;
    stats.prob.resize(v);
    const double denom = static_cast<double>(total) + smoothing_k_ * v;
    for (int t = 0; t < v; ++t)
      stats.prob[t] = (static_cast<double>(row[t]) + smoothing_k_) / denom;
    stats.by_prob_desc.resize(v);
    for (int t = 0; t < v; ++t) stats.by_prob_desc[t] = t;
    std::sort(stats.by_prob_desc.begin(), stats.by_prob_desc.end(),
              [&](int a, int b) {
                if (stats.prob[a] != stats.prob[b])
                  return stats.prob[a] > stats.prob[b];
                return a < b;
              });
    stats.cum_desc.resize(v);
    double cum = 0.0;
    for (int t = 0; t < v; ++t) {
      cum += stats.prob[stats.by_prob_desc[t]];
      stats.cum_desc[t] = cum;
    }
    return stats;
  };

  contexts_.reserve(counts.size());
  for (const auto& [context, row] : counts)
    contexts_.emplace(context, finalize(row));
  uniform_ = finalize(std::vector<int64_t>(v, 0));
}

const NgramModel::ContextStats& NgramModel::StatsFor(
    std::span<const int> prefix) const {
  const size_t m = static_cast<size_t>(order_ - 1);
  if (prefix.size() < m) return uniform_;
  std::string context;
  context.reserve(m);
  for (size_t i = prefix.size() - m; i < prefix.size(); ++i)
    context.push_back(alphabet_[prefix[i]]);
  auto it = contexts_.find(context);
  return it == contexts_.end() ? uniform_ : it->second;
}

std::vector<double> NgramModel::Distribution(
    std::span<const int> prefix) const {
  return StatsFor(prefix).prob;
}

std::vector<int> NgramModel::Encode(const std::string& text) const {
  std::vector<int> tokens;
  tokens.reserve(text.size());
  for (char c : text) {
    auto it = char_to_id_.find(c);
    if (it == char_to_id_.end())
      throw ValidationError(std::string("character '") + c +
                            "' outside model vocabulary");
    tokens.push_back(it->second);
  }
  return tokens;
}

std::string NgramModel::Decode(std::span<const int> tokens) const {
  std::string text;
  text.reserve(tokens.size());
  for (int t : tokens) {
    if (t < 0 || t >= static_cast<int>(alphabet_.size()))
      throw ValidationError("token id " + std::to_string(t) +
                            " outside vocabulary");
    text.push_back(alphabet_[t]);
  }
  return text;
}

NgramModel::Sample NgramModel::SampleSequence(std::span<const int> prompt,
                                              int length, double top_p,
                                              double temperature,
                                              Rng& rng) const {
  if (length < 1) throw ValidationError("sample length must be >= 1");
  if (!(top_p > 0.0 && top_p <= 1.0))
    throw ValidationError("top_p must be in (0, 1]");
  if (!(temperature > 0.0)) throw ValidationError("temperature must be > 0");

  const int v = vocab_size();
  std::vector<int> prefix(prompt.begin(), prompt.end());
  prefix.reserve(prompt.size() + length);

  Sample sample;
  sample.tokens.reserve(length);

  std::vector<double> tempered;  // scratch for temperature != 1
  for (int step = 0; step < length; ++step) {
    const ContextStats& stats = StatsFor(prefix);
    const std::vector<int>* order = &stats.by_prob_desc;
    const std::vector<double>* cum = &stats.cum_desc;

    std::vector<int> temp_order;
    std::vector<double> temp_cum;
    if (temperature != 1.0) {
      tempered.assign(v, 0.0);
      double total = 0.0;
      for (int t = 0; t < v; ++t) {
        tempered[t] = std::pow(stats.prob[t], 1.0 / temperature);
        total += tempered[t];
      }
      for (double& p : tempered) p /= total;
      temp_order.resize(v);
      for (int t = 0; t < v; ++t) temp_order[t] = t;
      std::sort(temp_order.begin(), temp_order.end(), [&](int a, int b) {
        if (tempered[a] != tempered[b]) return tempered[a] > tempered[b];
        return a < b;
      });
      temp_cum.resize(v);
      double running = 0.0;
      for (int t = 0; t < v; ++t) {
        running += tempered[temp_order[t]];
        temp_cum[t] = running;
      }
      order = &temp_order;
      cum = &temp_cum;
    }

    // Minimal descending-order cover with mass >= top_p.
    const auto cut = std::lower_bound(cum->begin(), cum->end(), top_p) -
                     cum->begin();
    const size_t cover = std::min<size_t>(cut + 1, cum->size());
    const double mass = (*cum)[cover - 1];

    const double u = rng.NextDouble() * mass;
    const size_t pick =
        std::upper_bound(cum->begin(), cum->begin() + cover, u) - cum->begin();
    const int token = (*order)[std::min(pick, cover - 1)];

    sample.tokens.push_back(token);
    sample.total_log_prob += std::log(stats.prob[token]);
    prefix.push_back(token);
  }
  return sample;
}

std::shared_ptr<NgramModel> TrainNgramModel(const std::string& corpus,
                                            int order, double smoothing_k) {
  return std::make_shared<NgramModel>(corpus, order, smoothing_k);
}

std::vector<SequenceTrace> LoadTraces(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open trace file: " + path);

  std::vector<SequenceTrace> traces;
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
    if (!row.is_object() || !row.contains("steps") || !row["steps"].is_array())
      throw ParseError(path, line_no, "expected an object with a 'steps' array");

    SequenceTrace trace;
    int step_no = 0;
    for (const auto& pair : row["steps"]) {
      if (!pair.is_array() || pair.size() != 2)
        throw ParseError(path, line_no,
                         "each step must be a [realized_token_prob, "
                         "cum_prob_above] pair");
      TokenStepTrace step;
      step.step = ++step_no;
      step.realized_token_prob = pair[0].get<double>();
      step.cum_prob_above = pair[1].get<double>();
      trace.steps.push_back(step);
    }
    if (row.contains("n") &&
        row["n"].get<int64_t>() != static_cast<int64_t>(trace.steps.size()))
      throw ParseError(path, line_no, "'n' does not match the step count");
    if (row.contains("true_source"))
      trace.true_source = ModelId(row["true_source"].get<std::string>());
    try {
      trace.Validate();
    } catch (const ValidationError& e) {
      throw ParseError(path, line_no, e.what());
    }
    traces.push_back(std::move(trace));
  }
  return traces;
}

void SaveTraces(const std::vector<SequenceTrace>& traces,
                const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot open for writing: " + path);
  for (const auto& trace : traces) {
    json row;
    if (trace.true_source) row["true_source"] = trace.true_source->str();
    row["n"] = trace.steps.size();
    json steps = json::array();
    for (const auto& step : trace.steps)
      steps.push_back({step.realized_token_prob, step.cum_prob_above});
    row["steps"] = std::move(steps);
    out << row.dump() << '\n';
  }
  if (!out) throw ValidationError("write failed: " + path);
}

}  // namespace arena
