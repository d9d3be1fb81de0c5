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

#ifndef ARENA_AUDIT_CORE_REPORT_HPP_
#define ARENA_AUDIT_CORE_REPORT_HPP_

#include <string>
#include <vector>

#include "arena/btrank.hpp"
#include "arena/corruption.hpp"

namespace arena {

// Aligned plain-text table. Column widths are computed over header and cells;
// numeric-looking cells are right-aligned.
std::string RenderTable(const std::vector<std::string>& header,
                        const std::vector<std::vector<std::string>>& rows);

// CSV line rendering with minimal quoting (fields containing ',', '"' or
// newline are quoted, embedded quotes doubled).
std::string CsvLine(const std::vector<std::string>& fields);

// Fixed %.6f rendering used everywhere a report prints a real number, so
// report bytes are reproducible.
std::string FormatDouble(double value);
// Compact rendering for values that are usually integral (rank medians).
std::string FormatCompact(double value);

// "28↑9" / "41↓5" / plain rank when unchanged, as in ranking-change tables.
std::string FormatRankShift(double new_rank, double delta);

std::string RenderLeaderboard(const Leaderboard& board);
std::string LeaderboardCsv(const Leaderboard& board);

// Rows = models (ordered by base rank), one column per summary: cells are
// "rank↑d" / "rank↓d" of the median outcome.
std::string RenderDisplacementTable(
    const Leaderboard& baseline, const std::vector<double>& rates,
    const std::vector<DisplacementSummary>& summaries);

// Machine-readable export: one row per (rate, trial, model).
std::string DisplacementCsv(const std::vector<double>& rates,
                            const std::vector<DisplacementSummary>& summaries);

}  // namespace arena

#endif  // ARENA_AUDIT_CORE_REPORT_HPP_
