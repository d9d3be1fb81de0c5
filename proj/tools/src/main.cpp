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

#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "arena/errors.hpp"
#include "commands.hpp"

// Exit codes: 0 success, 1 validation error, 2 runtime/convergence error.

namespace {

using arena::cli::Report;

std::vector<double> ParseRates(const std::string& list) {
  std::vector<double> rates;
  std::string item;
  std::istringstream in(list);
  while (std::getline(in, item, ',')) {
    try {
      size_t consumed = 0;
      rates.push_back(std::stod(item, &consumed));
      if (consumed != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw arena::ValidationError("cannot parse rate '" + item + "'");
    }
  }
  if (rates.empty()) throw arena::ValidationError("empty --rate list");
  return rates;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "arena-audit: Bradley-Terry leaderboards from pairwise battles, "
      "vote-corruption experiments, output attribution, arena simulation and "
      "inter-annotator agreement"};
  app.require_subcommand(1);

  std::string out_dir = "out";
  uint64_t seed = 0;

  // rank
  auto* rank = app.add_subcommand("rank", "Fit a leaderboard from battles");
  arena::cli::RankRequest rank_request;
  rank->add_option("--input", rank_request.input, "battle dataset file")
      ->required();
  rank->add_option("--format", rank_request.format,
                   "canonical | lmsys55k (default canonical)");
  rank->add_option("--bootstrap", rank_request.bootstrap,
                   "bootstrap resamples for rank intervals (0 = off)");
  rank->add_option("--seed", seed, "master seed");
  rank->add_option("--out", out_dir, "output directory (default out/)");

  // corrupt
  auto* corrupt = app.add_subcommand(
      "corrupt", "Inject corrupted votes and measure rank displacement");
  arena::cli::CorruptRequest corrupt_request;
  std::string rate_list;
  corrupt->add_option("--input", corrupt_request.input, "battle dataset file")
      ->required();
  corrupt->add_option("--format", corrupt_request.format,
                      "canonical | lmsys55k (default canonical)");
  corrupt
      ->add_option("--mode", corrupt_request.mode,
                   "apathetic | adversarial_flip | adversarial_inject")
      ->required();
  corrupt
      ->add_option("--rate", rate_list,
                   "corruption rate(s) in percent, comma separated")
      ->required();
  std::string corrupt_target;
  corrupt->add_option("--target", corrupt_target,
                      "target model (adversarial modes)");
  corrupt->add_option("--trials", corrupt_request.trials,
                      "Monte Carlo trials per rate (default 1)");
  corrupt->add_option("--tpr", corrupt_request.tpr,
                      "detector true positive rate (default 1)");
  corrupt->add_option("--tnr", corrupt_request.tnr,
                      "detector true negative rate (default 1)");
  corrupt->add_option("--seed", seed, "master seed");
  corrupt->add_option("--out", out_dir, "output directory (default out/)");

  // attribute
  auto* attribute = app.add_subcommand(
      "attribute", "Score traces with the top-p membership detector");
  arena::cli::AttributeRequest attribute_request;
  attribute
      ->add_option("--traces", attribute_request.traces, "trace file (JSONL)")
      ->required();
  attribute->add_option("--p", attribute_request.p,
                        "probability threshold (default 0.9)");
  attribute->add_option("--t", attribute_request.t,
                        "decision threshold (default 0.8)");
  attribute->add_flag("--sweep", attribute_request.sweep,
                      "sweep a (p, t) grid (requires --target)");
  std::string attribute_target;
  attribute->add_option("--target", attribute_target,
                        "target model for TPR/TNR evaluation");
  attribute->add_option("--seed", seed, "master seed");
  attribute->add_option("--out", out_dir, "output directory (default out/)");

  // simulate
  auto* simulate =
      app.add_subcommand("simulate", "Run the mock arena battle loop");
  arena::cli::SimulateRequest simulate_request;
  simulate
      ->add_option("--config", simulate_request.config,
                   "arena configuration file")
      ->required();
  simulate->add_option("--battles", simulate_request.battles,
                       "number of battles")
      ->required();
  auto* simulate_seed = simulate->add_option(
      "--seed", seed, "override the config seed for the battle loop");
  simulate->add_option("--out", out_dir, "output directory (default out/)");

  // kappa
  auto* kappa =
      app.add_subcommand("kappa", "Inter-annotator agreement (Fleiss' Kappa)");
  arena::cli::KappaRequest kappa_request;
  kappa
      ->add_option("--ratings", kappa_request.ratings,
                   "ratings CSV (item_id, annotator_id, dimension, category)")
      ->required();
  kappa->add_flag("--scale100", kappa_request.scale100,
                  "report kappa x 100");
  kappa->add_option("--seed", seed, "master seed");
  kappa->add_option("--out", out_dir, "output directory (default out/)");

  // gen
  auto* gen =
      app.add_subcommand("gen", "Generate synthetic battles from true scores");
  arena::cli::GenRequest gen_request;
  gen->add_option("--models", gen_request.models,
                  "ground-truth model spec (JSON)")
      ->required();
  gen->add_option("--n", gen_request.n, "number of battles")->required();
  gen->add_option("--seed", seed, "master seed");
  gen->add_option("--out", out_dir, "output directory (default out/)");

  // replay
  auto* replay = app.add_subcommand(
      "replay", "Re-execute a run from its manifest, byte-identically");
  std::string manifest_path;
  replay->add_option("--manifest", manifest_path, "manifest.json of a past run")
      ->required();
  replay->add_option("--out", out_dir, "output directory (default out/)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    Report report;
    if (rank->parsed()) {
      rank_request.seed = seed;
      report = RunRank(rank_request);
    } else if (corrupt->parsed()) {
      corrupt_request.rates = ParseRates(rate_list);
      if (!corrupt_target.empty()) corrupt_request.target = corrupt_target;
      corrupt_request.seed = seed;
      report = RunCorrupt(corrupt_request);
    } else if (attribute->parsed()) {
      if (!attribute_target.empty()) attribute_request.target = attribute_target;
      attribute_request.seed = seed;
      report = RunAttribute(attribute_request);
    } else if (simulate->parsed()) {
      if (simulate_seed->count() > 0) simulate_request.seed = seed;
      report = RunSimulate(simulate_request);
    } else if (kappa->parsed()) {
      kappa_request.seed = seed;
      report = RunKappa(kappa_request);
    } else if (gen->parsed()) {
      gen_request.seed = seed;
      report = RunGen(gen_request);
    } else if (replay->parsed()) {
      report = arena::cli::Replay(manifest_path);
    }
    arena::cli::WriteReport(report, out_dir);
    for (const auto& [name, content] : report.files)
      std::cout << "wrote " << out_dir << "/" << name << '\n';
    return 0;
  } catch (const arena::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const arena::ComputeError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
