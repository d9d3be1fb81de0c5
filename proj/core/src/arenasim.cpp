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

#include "arena/arenasim.hpp"

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace arena {
namespace {

namespace fs = std::filesystem;

std::string Trim(const std::string& s) {
  size_t begin = 0, end = s.size();
  while (begin < end && std::isspace(static_cast<unsigned char>(s[begin])))
    ++begin;
  while (end > begin && std::isspace(static_cast<unsigned char>(s[end - 1])))
    --end;
  return s.substr(begin, end - begin);
}

double ParseDouble(const std::string& value, const std::string& key) {
  try {
    size_t consumed = 0;
    double parsed = std::stod(value, &consumed);
    if (consumed != value.size()) throw std::invalid_argument(value);
    return parsed;
  } catch (const std::exception&) {
    throw ValidationError("config key '" + key + "': cannot parse number '" +
                          value + "'");
  }
}

int64_t ParseInt(const std::string& value, const std::string& key) {
  try {
    size_t consumed = 0;
    int64_t parsed = std::stoll(value, &consumed);
    if (consumed != value.size()) throw std::invalid_argument(value);
    return parsed;
  } catch (const std::exception&) {
    throw ValidationError("config key '" + key + "': cannot parse integer '" +
                          value + "'");
  }
}

std::string ReadFileOrThrow(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open file: " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

// One side firing -> vote for it; both or neither -> fallback.
std::optional<VoteLabel> VoteFromDecisions(int left_decision,
                                           int right_decision,
                                           FallbackVote fallback, Rng& rng) {
  if (left_decision == 1 && right_decision == 0) return VoteLabel::kLeftWins;
  if (right_decision == 1 && left_decision == 0) return VoteLabel::kRightWins;
  switch (fallback) {
    case FallbackVote::kTie: return VoteLabel::kTie;
    case FallbackVote::kAbstain: return std::nullopt;
    case FallbackVote::kRandom:
      return rng.NextBernoulli(0.5) ? VoteLabel::kLeftWins
                                    : VoteLabel::kRightWins;
  }
  return std::nullopt;
}

}  // namespace

FallbackVote FallbackVoteFromString(const std::string& name) {
  if (name == "tie") return FallbackVote::kTie;
  if (name == "abstain") return FallbackVote::kAbstain;
  if (name == "random") return FallbackVote::kRandom;
  throw ValidationError("unknown fallback vote policy '" + name + "'");
}

const char* ToString(FallbackVote fallback) {
  switch (fallback) {
    case FallbackVote::kTie: return "tie";
    case FallbackVote::kAbstain: return "abstain";
    case FallbackVote::kRandom: return "random";
  }
  return "tie";
}

void ArenaConfig::Validate() const {
  if (models.size() < 2)
    throw ValidationError("arena needs at least 2 models");
  std::set<std::string> ids;
  for (const auto& m : models) {
    if (!m.model) throw ValidationError("model '" + m.id.str() + "' not trained");
    if (!(m.sampling_weight > 0.0))
      throw ValidationError("model '" + m.id.str() +
                            "': sampling weight must be > 0");
    if (!ids.insert(m.id.str()).second)
      throw ValidationError("duplicate model id '" + m.id.str() + "'");
  }
  if (!(honest_epsilon >= 0.0 && honest_epsilon <= 0.5))
    throw ValidationError("honest.epsilon must be in [0, 0.5]");
  if (prompts.empty()) throw ValidationError("prompt pool is empty");
  if (generation.length < 1)
    throw ValidationError("gen.length must be >= 1");
  if (!(generation.top_p > 0.0 && generation.top_p <= 1.0))
    throw ValidationError("gen.top_p must be in (0, 1]");
  if (!(generation.temperature > 0.0))
    throw ValidationError("gen.temperature must be > 0");
  if (attacker) {
    attacker->params.Validate();
    if (!(attacker->rate >= 0.0 && attacker->rate <= 1.0))
      throw ValidationError("attacker.rate must be in [0, 1]");
    if (ids.find(attacker->target.str()) == ids.end())
      throw ValidationError("attacker target '" + attacker->target.str() +
                            "' not in the model roster");
  }
}

const ArenaModel& ArenaConfig::ModelById(const ModelId& id) const {
  for (const auto& m : models)
    if (m.id == id) return m;
  throw ValidationError("model '" + id.str() + "' not in the arena roster");
}

ArenaConfig LoadArenaConfig(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open config file: " + path);
  const fs::path base = fs::path(path).parent_path();

  std::map<std::string, std::string> values;
  std::vector<std::string> model_order;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string stripped = Trim(line.substr(0, line.find('#')));
    if (stripped.empty()) continue;
    const size_t eq = stripped.find('=');
    if (eq == std::string::npos)
      throw ParseError(path, line_no, "expected 'key = value'");
    const std::string key = Trim(stripped.substr(0, eq));
    const std::string value = Trim(stripped.substr(eq + 1));
    if (key.empty()) throw ParseError(path, line_no, "empty key");
    if (!values.emplace(key, value).second)
      throw ParseError(path, line_no, "duplicate key '" + key + "'");
    if (key.rfind("models.", 0) == 0) {
      const size_t dot = key.find('.', 7);
      if (dot == std::string::npos)
        throw ParseError(path, line_no, "expected models.<id>.<property>");
      const std::string id = key.substr(7, dot - 7);
      if (std::find(model_order.begin(), model_order.end(), id) ==
          model_order.end())
        model_order.push_back(id);
    }
  }

  std::set<std::string> consumed;
  auto take = [&](const std::string& key) -> std::optional<std::string> {
    auto it = values.find(key);
    if (it == values.end()) return std::nullopt;
    consumed.insert(key);
    return it->second;
  };

  ArenaConfig config;
  if (auto v = take("seed")) config.seed = static_cast<uint64_t>(ParseInt(*v, "seed"));
  if (auto v = take("honest.epsilon"))
    config.honest_epsilon = ParseDouble(*v, "honest.epsilon");
  if (auto v = take("gen.length"))
    config.generation.length = static_cast<int>(ParseInt(*v, "gen.length"));
  if (auto v = take("gen.top_p"))
    config.generation.top_p = ParseDouble(*v, "gen.top_p");
  if (auto v = take("gen.temperature"))
    config.generation.temperature = ParseDouble(*v, "gen.temperature");

  // Train every model over the union alphabet so any output can be scored
  // under any model.
  struct PendingModel {
    std::string id;
    std::string corpus;
    double weight = 1.0;
    int order = 3;
    double smoothing = 0.05;
  };
  std::vector<PendingModel> pending;
  std::string union_alphabet;
  for (const auto& id : model_order) {
    PendingModel m;
    m.id = id;
    auto corpus_path = take("models." + id + ".corpus");
    if (!corpus_path)
      throw ValidationError("model '" + id + "': missing models." + id +
                            ".corpus");
    m.corpus = ReadFileOrThrow(base / *corpus_path);
    if (auto v = take("models." + id + ".weight"))
      m.weight = ParseDouble(*v, "models." + id + ".weight");
    if (auto v = take("models." + id + ".order"))
      m.order = static_cast<int>(ParseInt(*v, "models." + id + ".order"));
    if (auto v = take("models." + id + ".smoothing"))
      m.smoothing = ParseDouble(*v, "models." + id + ".smoothing");
    union_alphabet += m.corpus;
    pending.push_back(std::move(m));
  }
  for (const auto& m : pending) {
    ArenaModel entry;
    entry.id = ModelId(m.id);
    entry.sampling_weight = m.weight;
    entry.model = std::make_shared<NgramModel>(m.corpus, m.order, m.smoothing,
                                               union_alphabet);
    config.models.push_back(std::move(entry));
  }

  if (auto target = take("attacker.target")) {
    AttackerConfig attacker;
    attacker.target = ModelId(*target);
    if (auto v = take("attacker.p")) attacker.params.p = ParseDouble(*v, "attacker.p");
    if (auto v = take("attacker.t")) attacker.params.t = ParseDouble(*v, "attacker.t");
    if (auto v = take("attacker.fallback"))
      attacker.fallback = FallbackVoteFromString(*v);
    if (auto v = take("attacker.rate"))
      attacker.rate = ParseDouble(*v, "attacker.rate");
    config.attacker = attacker;
  }

  if (auto prompts_file = take("prompts.file")) {
    const std::string text = ReadFileOrThrow(base / *prompts_file);
    std::istringstream lines(text);
    std::string prompt;
    while (std::getline(lines, prompt)) {
      if (!prompt.empty() && prompt.back() == '\r') prompt.pop_back();
      if (!prompt.empty()) config.prompts.push_back(prompt);
    }
    take("prompts.count");
    take("prompts.length");
  } else {
    int64_t count = 64;
    int64_t length = 16;
    if (auto v = take("prompts.count")) count = ParseInt(*v, "prompts.count");
    if (auto v = take("prompts.length")) length = ParseInt(*v, "prompts.length");
    if (count < 1 || length < 1)
      throw ValidationError("prompts.count and prompts.length must be >= 1");
    Rng rng(DeriveSeed(config.seed, 101));
    for (int64_t i = 0; i < count; ++i) {
      const auto& corpus = pending[rng.NextIndex(pending.size())].corpus;
      const auto span = static_cast<size_t>(length);
      if (corpus.size() <= span) {
        config.prompts.push_back(corpus);
      } else {
        const size_t start = rng.NextIndex(corpus.size() - span);
        config.prompts.push_back(corpus.substr(start, span));
      }
    }
  }

  for (const auto& [key, value] : values) {
    if (consumed.find(key) == consumed.end())
      throw ValidationError("unknown config key '" + key + "'");
  }

  config.Validate();
  return config;
}

std::pair<ModelId, ModelId> SamplePair(const ArenaConfig& config, Rng& rng) {
  const size_t k = config.models.size();
  double total = 0.0;
  for (const auto& m : config.models) total += m.sampling_weight;

  auto draw = [&](size_t exclude) {
    const double mass =
        exclude < k ? total - config.models[exclude].sampling_weight : total;
    double u = rng.NextDouble() * mass;
    for (size_t i = 0; i < k; ++i) {
      if (i == exclude) continue;
      u -= config.models[i].sampling_weight;
      if (u <= 0.0) return i;
    }
    return exclude < 1 ? k - 1 : (exclude == k - 1 ? k - 2 : k - 1);
  };

  const size_t first = draw(k);
  const size_t second = draw(first);
  return {config.models[first].id, config.models[second].id};
}

std::optional<VoteLabel> AttackerVote(const SequenceTrace& left_trace,
                                      const SequenceTrace& right_trace,
                                      const AttributionParams& params,
                                      FallbackVote fallback, Rng& rng) {
  const int left = Attribute(left_trace, params).decision;
  const int right = Attribute(right_trace, params).decision;
  return VoteFromDecisions(left, right, fallback, rng);
}

ArenaOutcome RunArena(const ArenaConfig& config, int64_t n_battles,
                      uint64_t seed) {
  config.Validate();
  if (n_battles < 1) throw ValidationError("n_battles must be >= 1");

  Rng rng(seed);
  std::vector<PreferenceRecord> records;
  records.reserve(n_battles);
  AttackerStats stats;

  const NgramModel* target_model = nullptr;
  if (config.attacker)
    target_model = config.ModelById(config.attacker->target).model.get();

  for (int64_t b = 0; b < n_battles; ++b) {
    const auto [left_id, right_id] = SamplePair(config, rng);
    const ArenaModel& left = config.ModelById(left_id);
    const ArenaModel& right = config.ModelById(right_id);
    const std::string& prompt = config.prompts[rng.NextIndex(config.prompts.size())];

    const auto left_sample = left.model->SampleSequence(
        left.model->Encode(prompt), config.generation.length,
        config.generation.top_p, config.generation.temperature, rng);
    const auto right_sample = right.model->SampleSequence(
        right.model->Encode(prompt), config.generation.length,
        config.generation.top_p, config.generation.temperature, rng);
    const std::string left_text = left.model->Decode(left_sample.tokens);
    const std::string right_text = right.model->Decode(right_sample.tokens);

    std::optional<VoteLabel> vote;
    bool attacker_cast = false;
    if (config.attacker && rng.NextBernoulli(config.attacker->rate)) {
      ++stats.battles_seen;
      const bool target_present = left_id == config.attacker->target ||
                                  right_id == config.attacker->target;
      if (target_present) ++stats.target_appearances;

      const auto target_prompt = target_model->Encode(prompt);
      const auto left_trace = TraceSequence(
          *target_model, target_prompt, target_model->Encode(left_text));
      const auto right_trace = TraceSequence(
          *target_model, target_prompt, target_model->Encode(right_text));
      const int left_decision =
          Attribute(left_trace, config.attacker->params).decision;
      const int right_decision =
          Attribute(right_trace, config.attacker->params).decision;
      if (left_decision == 1 && left_id != config.attacker->target)
        ++stats.detector_false_fires;
      if (right_decision == 1 && right_id != config.attacker->target)
        ++stats.detector_false_fires;

      vote = VoteFromDecisions(left_decision, right_decision,
                               config.attacker->fallback, rng);
      attacker_cast = true;
      if (vote) {
        const bool voted_target =
            (*vote == VoteLabel::kLeftWins &&
             left_id == config.attacker->target) ||
            (*vote == VoteLabel::kRightWins &&
             right_id == config.attacker->target);
        if (voted_target) ++stats.votes_cast_for_target;
      }
    } else {
      const double left_quality =
          left_sample.total_log_prob / config.generation.length;
      const double right_quality =
          right_sample.total_log_prob / config.generation.length;
      if (left_quality == right_quality) {
        vote = VoteLabel::kTie;
      } else {
        bool left_wins = left_quality > right_quality;
        if (config.honest_epsilon > 0.0 &&
            rng.NextBernoulli(config.honest_epsilon))
          left_wins = !left_wins;
        vote = left_wins ? VoteLabel::kLeftWins : VoteLabel::kRightWins;
      }
    }

    if (!vote) continue;  // abstention: no record logged
    PreferenceRecord record;
    record.left = left_id;
    record.right = right_id;
    record.label = *vote;
    record.prompt = prompt;
    record.response_left = left_text;
    record.response_right = right_text;
    record.provenance =
        attacker_cast ? Provenance::kAdversarial : Provenance::kOrganic;
    records.push_back(std::move(record));
  }

  std::vector<ModelId> roster;
  roster.reserve(config.models.size());
  for (const auto& m : config.models) roster.push_back(m.id);

  ArenaOutcome outcome{PreferenceDataset(std::move(roster), std::move(records)),
                       stats};
  return outcome;
}

}  // namespace arena
