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

#include "commands.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "arena/agreement.hpp"
#include "arena/arenasim.hpp"
#include "arena/attribution.hpp"
#include "arena/btrank.hpp"
#include "arena/corruption.hpp"
#include "arena/errors.hpp"
#include "arena/prefdata.hpp"
#include "arena/report.hpp"
#include "arena/rng.hpp"
#include "nlohmann/json.hpp"

namespace arena::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr const char* kArtifactVersion = "0.1.0";

DatasetFormat FormatFromString(const std::string& name) {
  if (name == "canonical") return DatasetFormat::kCanonicalJsonl;
  if (name == "lmsys55k") return DatasetFormat::kLmsys55kCsv;
  throw ValidationError("unknown dataset format '" + name +
                        "' (expected canonical or lmsys55k)");
}

json MakeManifest(const std::string& command, const json& parameters,
                  uint64_t seed, const std::vector<std::string>& inputs) {
  json manifest;
  manifest["artifact_version"] = kArtifactVersion;
  manifest["command"] = command;
  manifest["parameters"] = parameters;
  manifest["seed"] = seed;
  json digests = json::array();
  for (const auto& path : inputs)
    digests.push_back({{"path", path}, {"fnv1a64", DigestFile(path)}});
  manifest["inputs"] = std::move(digests);
  return manifest;
}

std::string ManifestBytes(const json& manifest) {
  return manifest.dump(2) + "\n";
}

json ToJson(const RankRequest& r) {
  return {{"input", r.input},
          {"format", r.format},
          {"bootstrap", r.bootstrap}};
}

RankRequest RankFromJson(const json& p, uint64_t seed) {
  RankRequest r;
  r.input = p.at("input").get<std::string>();
  r.format = p.at("format").get<std::string>();
  r.bootstrap = p.at("bootstrap").get<int>();
  r.seed = seed;
  return r;
}

json ToJson(const CorruptRequest& r) {
  json p = {{"input", r.input},   {"format", r.format}, {"mode", r.mode},
            {"rates", r.rates},   {"trials", r.trials}, {"tpr", r.tpr},
            {"tnr", r.tnr}};
  if (r.target) p["target"] = *r.target;
  return p;
}

CorruptRequest CorruptFromJson(const json& p, uint64_t seed) {
  CorruptRequest r;
  r.input = p.at("input").get<std::string>();
  r.format = p.at("format").get<std::string>();
  r.mode = p.at("mode").get<std::string>();
  r.rates = p.at("rates").get<std::vector<double>>();
  r.trials = p.at("trials").get<int>();
  r.tpr = p.at("tpr").get<double>();
  r.tnr = p.at("tnr").get<double>();
  if (p.contains("target")) r.target = p["target"].get<std::string>();
  r.seed = seed;
  return r;
}

json ToJson(const AttributeRequest& r) {
  json p = {{"traces", r.traces}, {"p", r.p}, {"t", r.t}, {"sweep", r.sweep}};
  if (r.target) p["target"] = *r.target;
  return p;
}

AttributeRequest AttributeFromJson(const json& p, uint64_t seed) {
  AttributeRequest r;
  r.traces = p.at("traces").get<std::string>();
  r.p = p.at("p").get<double>();
  r.t = p.at("t").get<double>();
  r.sweep = p.at("sweep").get<bool>();
  if (p.contains("target")) r.target = p["target"].get<std::string>();
  r.seed = seed;
  return r;
}

json ToJson(const SimulateRequest& r) {
  json p = {{"config", r.config}, {"battles", r.battles}};
  if (r.seed) p["seed_override"] = *r.seed;
  return p;
}

SimulateRequest SimulateFromJson(const json& p) {
  SimulateRequest r;
  r.config = p.at("config").get<std::string>();
  r.battles = p.at("battles").get<int64_t>();
  if (p.contains("seed_override")) r.seed = p["seed_override"].get<uint64_t>();
  return r;
}

json ToJson(const KappaRequest& r) {
  return {{"ratings", r.ratings}, {"scale100", r.scale100}};
}

KappaRequest KappaFromJson(const json& p, uint64_t seed) {
  KappaRequest r;
  r.ratings = p.at("ratings").get<std::string>();
  r.scale100 = p.at("scale100").get<bool>();
  r.seed = seed;
  return r;
}

json ToJson(const GenRequest& r) {
  return {{"models", r.models}, {"n", r.n}};
}

GenRequest GenFromJson(const json& p, uint64_t seed) {
  GenRequest r;
  r.models = p.at("models").get<std::string>();
  r.n = p.at("n").get<int64_t>();
  r.seed = seed;
  return r;
}

GroundTruthModelSpec LoadModelSpec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open model spec file: " + path);
  json spec;
  try {
    spec = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationError(path + ": invalid JSON: " + e.what());
  }
  if (!spec.is_object() || !spec.contains("models") ||
      !spec["models"].is_array())
    throw ValidationError(path + ": expected an object with a 'models' array");

  GroundTruthModelSpec ground_truth;
  if (spec.contains("tie_probability"))
    ground_truth.tie_probability = spec["tie_probability"].get<double>();
  for (const auto& entry : spec["models"]) {
    if (!entry.is_object() || !entry.contains("name") ||
        !entry.contains("score"))
      throw ValidationError(path +
                            ": each model needs 'name' and 'score' fields");
    ground_truth.true_scores.emplace_back(
        ModelId(entry["name"].get<std::string>()),
        entry["score"].get<double>());
  }
  ground_truth.Validate();
  return ground_truth;
}

std::string AttackerStatsText(const AttackerStats& stats) {
  std::ostringstream out;
  out << "battles_seen           " << stats.battles_seen << '\n'
      << "target_appearances     " << stats.target_appearances << '\n'
      << "votes_cast_for_target  " << stats.votes_cast_for_target << '\n'
      << "detector_false_fires   " << stats.detector_false_fires << '\n';
  return out.str();
}

std::string PercentCell(double fraction) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.2f", fraction * 100.0);
  return buffer;
}

}  // namespace

std::string DigestFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open input file: " + path);
  uint64_t hash = 14695981039346656037ull;
  char buffer[1 << 16];
  while (in.read(buffer, sizeof(buffer)) || in.gcount() > 0) {
    const auto count = in.gcount();
    for (std::streamsize i = 0; i < count; ++i) {
      hash ^= static_cast<unsigned char>(buffer[i]);
      hash *= 1099511628211ull;
    }
    if (!in) break;
  }
  char hex[17];
  std::snprintf(hex, sizeof(hex), "%016llx",
                static_cast<unsigned long long>(hash));
  return hex;
}

Report RunRank(const RankRequest& request) {
  if (request.bootstrap < 0)
    throw ValidationError("--bootstrap must be >= 0");
  const auto dataset =
      LoadDataset(request.input, FormatFromString(request.format));

  Leaderboard board;
  if (request.bootstrap > 0) {
    const auto bootstrap =
        BootstrapRanks(dataset, request.bootstrap, request.seed);
    board = bootstrap.board;
  } else {
    board = MakeLeaderboard(FitBradleyTerry(dataset).scores);
  }

  Report report;
  report.Add("leaderboard.txt", RenderLeaderboard(board));
  report.Add("leaderboard.csv", LeaderboardCsv(board));
  report.Add("manifest.json",
             ManifestBytes(MakeManifest("rank", ToJson(request), request.seed,
                                        {request.input})));
  return report;
}

Report RunCorrupt(const CorruptRequest& request) {
  if (request.rates.empty())
    throw ValidationError("at least one --rate value is required");
  if (request.trials < 1) throw ValidationError("--trials must be >= 1");
  const auto dataset =
      LoadDataset(request.input, FormatFromString(request.format));

  CorruptionSpec spec;
  spec.mode = CorruptionModeFromString(request.mode);
  if (request.target) spec.target = ModelId(*request.target);
  spec.detector = {request.tpr, request.tnr};

  const Leaderboard baseline =
      MakeLeaderboard(FitBradleyTerry(dataset).scores);
  std::vector<DisplacementSummary> summaries;
  summaries.reserve(request.rates.size());
  for (size_t i = 0; i < request.rates.size(); ++i) {
    CorruptionSpec rate_spec = spec;
    rate_spec.rate_percent = request.rates[i];
    rate_spec.seed = DeriveSeed(request.seed, i);
    summaries.push_back(
        RunDisplacementExperiment(dataset, rate_spec, request.trials));
  }

  Report report;
  report.Add("displacement.txt",
             RenderDisplacementTable(baseline, request.rates, summaries));
  report.Add("displacement.csv", DisplacementCsv(request.rates, summaries));
  report.Add("manifest.json",
             ManifestBytes(MakeManifest("corrupt", ToJson(request),
                                        request.seed, {request.input})));
  return report;
}

Report RunAttribute(const AttributeRequest& request) {
  const auto traces = LoadTraces(request.traces);
  if (traces.empty())
    throw ValidationError("no traces in " + request.traces);
  const AttributionParams params{request.p, request.t};
  params.Validate();

  std::vector<std::vector<std::string>> rows;
  std::string csv = CsvLine({"trace", "true_source", "n", "confidence",
                             "decision"});
  for (size_t i = 0; i < traces.size(); ++i) {
    const auto result = Attribute(traces[i], params);
    const std::string source =
        traces[i].true_source ? traces[i].true_source->str() : "-";
    rows.push_back({std::to_string(i), source,
                    std::to_string(traces[i].length()),
                    FormatDouble(result.confidence),
                    std::to_string(result.decision)});
    csv += CsvLine({std::to_string(i), source,
                    std::to_string(traces[i].length()),
                    FormatDouble(result.confidence),
                    std::to_string(result.decision)});
  }

  Report report;
  report.Add("attribution.txt",
             RenderTable({"trace", "true_source", "n", "confidence",
                          "decision"},
                         rows));
  report.Add("attribution.csv", csv);

  if (request.target) {
    const ModelId target(*request.target);
    const auto quality = EvaluateDetector(traces, target, params);
    report.Add(
        "detector.txt",
        RenderTable({"model", "tpr", "tnr", "mean_tokens"},
                    {{target.str(), PercentCell(quality.tpr),
                      PercentCell(quality.tnr),
                      FormatDouble(quality.mean_tokens)}}));
    if (request.sweep) {
      const std::vector<double> p_grid = {0.5,  0.6,  0.7,  0.8, 0.9,
                                          0.95, 0.99, 1.0};
      std::vector<double> t_grid;
      for (int i = 1; i <= 20; ++i) t_grid.push_back(0.05 * i);
      const auto entries = SweepDetector(traces, target, p_grid, t_grid);
      std::string sweep_csv = CsvLine({"p", "t", "tpr", "tnr", "mean_tokens"});
      for (const auto& entry : entries) {
        sweep_csv += CsvLine({FormatDouble(entry.params.p),
                              FormatDouble(entry.params.t),
                              FormatDouble(entry.quality.tpr),
                              FormatDouble(entry.quality.tnr),
                              FormatDouble(entry.quality.mean_tokens)});
      }
      report.Add("sweep.csv", sweep_csv);
    }
  } else if (request.sweep) {
    throw ValidationError("--sweep requires --target");
  }

  report.Add("manifest.json",
             ManifestBytes(MakeManifest("attribute", ToJson(request),
                                        request.seed, {request.traces})));
  return report;
}

Report RunSimulate(const SimulateRequest& request) {
  if (request.battles < 1) throw ValidationError("--battles must be >= 1");
  auto config = LoadArenaConfig(request.config);
  const uint64_t seed = request.seed.value_or(config.seed);
  const auto outcome = RunArena(config, request.battles, seed);

  Report report;
  report.Add("battles.jsonl", DatasetToJsonl(outcome.battles));
  report.Add("attacker_stats.txt", AttackerStatsText(outcome.attacker_stats));

  // Rank the models that actually fought at least one battle.
  std::string leaderboard_text;
  try {
    std::vector<PreferenceRecord> records = outcome.battles.records();
    const auto played = PreferenceDataset::FromRecords(std::move(records));
    leaderboard_text =
        RenderLeaderboard(MakeLeaderboard(FitBradleyTerry(played).scores));
  } catch (const Error& e) {
    leaderboard_text = std::string("leaderboard unavailable: ") + e.what() +
                       "\n";
  }
  report.Add("leaderboard.txt", leaderboard_text);
  report.Add("manifest.json",
             ManifestBytes(MakeManifest("simulate", ToJson(request), seed,
                                        {request.config})));
  return report;
}

Report RunKappa(const KappaRequest& request) {
  const auto matrices = LoadRatings(request.ratings);

  std::vector<std::vector<std::string>> rows;
  const std::string value_header = request.scale100 ? "kappa_x100" : "kappa";
  std::string csv = CsvLine({"dimension", value_header, "items", "annotators"});
  for (const auto& [dimension, matrix] : matrices) {
    const double kappa = FleissKappa(matrix);
    const double value = request.scale100 ? kappa * 100.0 : kappa;
    rows.push_back({dimension, FormatDouble(value),
                    std::to_string(matrix.counts.size()),
                    std::to_string(matrix.annotators_per_item)});
    csv += CsvLine({dimension, FormatDouble(value),
                    std::to_string(matrix.counts.size()),
                    std::to_string(matrix.annotators_per_item)});
  }

  Report report;
  report.Add("kappa.txt",
             RenderTable({"dimension", value_header, "items", "annotators"},
                         rows));
  report.Add("kappa.csv", csv);
  report.Add("manifest.json",
             ManifestBytes(MakeManifest("kappa", ToJson(request), request.seed,
                                        {request.ratings})));
  return report;
}

Report RunGen(const GenRequest& request) {
  if (request.n < 1) throw ValidationError("--n must be >= 1");
  const auto spec = LoadModelSpec(request.models);
  const auto dataset = GenerateSynthetic(
      spec, static_cast<size_t>(request.n), request.seed);

  Report report;
  report.Add("battles.jsonl", DatasetToJsonl(dataset));
  report.Add("manifest.json",
             ManifestBytes(MakeManifest("gen", ToJson(request), request.seed,
                                        {request.models})));
  return report;
}

Report Replay(const std::string& manifest_path) {
  std::ifstream in(manifest_path);
  if (!in) throw ValidationError("cannot open manifest: " + manifest_path);
  json manifest;
  try {
    manifest = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationError(manifest_path + ": invalid JSON: " + e.what());
  }
  for (const char* key : {"command", "parameters", "seed", "inputs"}) {
    if (!manifest.contains(key))
      throw ValidationError(manifest_path + ": manifest missing '" +
                            std::string(key) + "'");
  }

  for (const auto& input : manifest["inputs"]) {
    const auto path = input.at("path").get<std::string>();
    const auto expected = input.at("fnv1a64").get<std::string>();
    const auto actual = DigestFile(path);
    if (actual != expected)
      throw ValidationError("input '" + path + "' changed since the run (" +
                            "digest " + actual + ", manifest has " + expected +
                            ")");
  }

  const auto command = manifest["command"].get<std::string>();
  const auto& parameters = manifest["parameters"];
  const auto seed = manifest["seed"].get<uint64_t>();
  if (command == "rank") return RunRank(RankFromJson(parameters, seed));
  if (command == "corrupt")
    return RunCorrupt(CorruptFromJson(parameters, seed));
  if (command == "attribute")
    return RunAttribute(AttributeFromJson(parameters, seed));
  if (command == "simulate") return RunSimulate(SimulateFromJson(parameters));
  if (command == "kappa") return RunKappa(KappaFromJson(parameters, seed));
  if (command == "gen") return RunGen(GenFromJson(parameters, seed));
  throw ValidationError("manifest names unknown command '" + command + "'");
}

void WriteReport(const Report& report, const std::string& out_dir) {
  fs::create_directories(out_dir);
  for (const auto& [name, content] : report.files) {
    const fs::path path = fs::path(out_dir) / name;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("cannot write " + path.string());
    out << content;
    if (!out) throw ValidationError("write failed: " + path.string());
  }
}

}  // namespace arena::cli
