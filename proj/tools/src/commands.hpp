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

#ifndef ARENA_AUDIT_TOOLS_COMMANDS_HPP_
#define ARENA_AUDIT_TOOLS_COMMANDS_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace arena::cli {

// A finished run: named report files (manifest.json included). Nothing
// touches the filesystem until the whole run has succeeded, so a failing run
// leaves no partial artifacts.
struct Report {
  std::vector<std::pair<std::string, std::string>> files;  // name -> content

  void Add(std::string name, std::string content) {
    files.emplace_back(std::move(name), std::move(content));
  }
};

struct RankRequest {
  std::string input;
  std::string format = "canonical";  // canonical | lmsys55k
  int bootstrap = 0;
  uint64_t seed = 0;
};

struct CorruptRequest {
  std::string input;
  std::string format = "canonical";
  std::string mode = "apathetic";
  std::vector<double> rates;
  std::optional<std::string> target;
  int trials = 1;
  double tpr = 1.0;
  double tnr = 1.0;
  uint64_t seed = 0;
};

struct AttributeRequest {
  std::string traces;
  double p = 0.9;
  double t = 0.8;
  bool sweep = false;
  std::optional<std::string> target;
  uint64_t seed = 0;
};

struct SimulateRequest {
  std::string config;
  int64_t battles = 0;
  std::optional<uint64_t> seed;  // overrides the config seed when present
};

struct KappaRequest {
  std::string ratings;
  bool scale100 = false;
  uint64_t seed = 0;
};

struct GenRequest {
  std::string models;  // ground-truth spec file
  int64_t n = 0;
  uint64_t seed = 0;
};

// Each runner validates, computes, and returns the full report including
// manifest.json, which records the command, its parameters, the seed and the
// input file digests.
Report RunRank(const RankRequest& request);
Report RunCorrupt(const CorruptRequest& request);
Report RunAttribute(const AttributeRequest& request);
Report RunSimulate(const SimulateRequest& request);
Report RunKappa(const KappaRequest& request);
Report RunGen(const GenRequest& request);

// Re-executes the run described by a manifest file; the regenerated report,
// manifest included, is byte-identical to the original. Fails if an input
// file's digest no longer matches.
Report Replay(const std::string& manifest_path);

// Writes all report files under out_dir (created if needed).
void WriteReport(const Report& report, const std::string& out_dir);

// FNV-1a 64-bit content digest, hex-encoded.
std::string DigestFile(const std::string& path);

}  // namespace arena::cli

#endif  // ARENA_AUDIT_TOOLS_COMMANDS_HPP_
