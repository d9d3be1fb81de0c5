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

#include "arena/report.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace arena {
namespace {

bool LooksNumeric(const std::string& cell) {
  if (cell.empty()) return false;
  for (char c : cell) {
    if (!std::isdigit(static_cast<unsigned char>(c)) && c != '.' && c != '-' &&
        c != '+' && c != 'e')
      return false;
  }
  return true;
}

// Display width in terminal columns; the arrow glyphs are 3 UTF-8 bytes but
// one column wide.
size_t DisplayWidth(const std::string& cell) {
  size_t width = 0;
  for (char c : cell)
    if ((static_cast<unsigned char>(c) & 0xC0) != 0x80) ++width;
  return width;
}

std::string Pad(const std::string& cell, size_t width, bool right_align) {
  const size_t current = DisplayWidth(cell);
  const std::string padding(width > current ? width - current : 0, ' ');
  return right_align ? padding + cell : cell + padding;
}

}  // namespace

std::string FormatDouble(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.6f", value);
  return buffer;
}

std::string FormatCompact(double value) {
  const double rounded = std::round(value);
  char buffer[64];
  if (std::abs(value - rounded) < 1e-9) {
    std::snprintf(buffer, sizeof(buffer), "%lld",
                  static_cast<long long>(rounded));
  } else {
    std::snprintf(buffer, sizeof(buffer), "%.1f", value);
  }
  return buffer;
}

std::string FormatRankShift(double new_rank, double delta) {
  std::string cell = FormatCompact(new_rank);
  if (delta > 0)
    cell += "↑" + FormatCompact(delta);
  else if (delta < 0)
    cell += "↓" + FormatCompact(-delta);
  return cell;
}

std::string RenderTable(const std::vector<std::string>& header,
                        const std::vector<std::vector<std::string>>& rows) {
  const size_t cols = header.size();
  std::vector<size_t> width(cols, 0);
  std::vector<bool> numeric(cols, true);
  for (size_t c = 0; c < cols; ++c) width[c] = DisplayWidth(header[c]);
  for (const auto& row : rows) {
    for (size_t c = 0; c < cols && c < row.size(); ++c) {
      width[c] = std::max(width[c], DisplayWidth(row[c]));
      if (!row[c].empty() && !LooksNumeric(row[c]) &&
          row[c].find("↑") == std::string::npos &&
          row[c].find("↓") == std::string::npos)
        numeric[c] = false;
    }
  }

  std::ostringstream out;
  for (size_t c = 0; c < cols; ++c) {
    if (c) out << "  ";
    out << Pad(header[c], width[c], false);
  }
  out << '\n';
  for (size_t c = 0; c < cols; ++c) {
    if (c) out << "  ";
    out << std::string(width[c], '-');
  }
  out << '\n';
  for (const auto& row : rows) {
    for (size_t c = 0; c < cols; ++c) {
      if (c) out << "  ";
      out << Pad(c < row.size() ? row[c] : "", width[c], numeric[c]);
    }
    out << '\n';
  }
  return out.str();
}

std::string CsvLine(const std::vector<std::string>& fields) {
  std::string line;
  for (size_t i = 0; i < fields.size(); ++i) {
    if (i) line += ',';
    const std::string& field = fields[i];
    if (field.find_first_of(",\"\n") != std::string::npos) {
      line += '"';
      for (char c : field) {
        if (c == '"') line += '"';
        line += c;
      }
      line += '"';
    } else {
      line += field;
    }
  }
  line += '\n';
  return line;
}

std::string RenderLeaderboard(const Leaderboard& board) {
  const bool has_intervals =
      std::any_of(board.rows.begin(), board.rows.end(),
                  [](const LeaderboardRow& r) { return r.rank_interval.has_value(); });
  std::vector<std::string> header{"rank", "model", "score"};
  if (has_intervals) header.push_back("rank 95% interval");
  std::vector<std::vector<std::string>> rows;
  rows.reserve(board.rows.size());
  for (const auto& row : board.rows) {
    std::vector<std::string> cells{std::to_string(row.rank), row.model.str(),
                                   FormatDouble(row.score)};
    if (has_intervals) {
      cells.push_back(row.rank_interval
                          ? "[" + std::to_string(row.rank_interval->first) +
                                ", " + std::to_string(row.rank_interval->second) +
                                "]"
                          : "-");
    }
    rows.push_back(std::move(cells));
  }
  return RenderTable(header, rows);
}

std::string LeaderboardCsv(const Leaderboard& board) {
  std::string out = CsvLine(
      {"rank", "model", "score", "rank_interval_low", "rank_interval_high"});
  for (const auto& row : board.rows) {
    out += CsvLine({std::to_string(row.rank), row.model.str(),
                    FormatDouble(row.score),
                    row.rank_interval ? std::to_string(row.rank_interval->first) : "",
                    row.rank_interval ? std::to_string(row.rank_interval->second) : ""});
  }
  return out;
}

std::string RenderDisplacementTable(
    const Leaderboard& baseline, const std::vector<double>& rates,
    const std::vector<DisplacementSummary>& summaries) {
  std::vector<std::string> header{"model", "orig."};
  for (double r : rates) header.push_back("r=" + FormatCompact(r));

  std::vector<std::vector<std::string>> rows;
  for (size_t m = 0; m < baseline.rows.size(); ++m) {
    std::vector<std::string> cells{baseline.rows[m].model.str(),
                                   std::to_string(baseline.rows[m].rank)};
    for (const auto& summary : summaries) {
      const auto& stats = summary.per_model[m];
      const double median_new_rank = stats.base_rank - stats.median_delta;
      cells.push_back(FormatRankShift(median_new_rank, stats.median_delta));
    }
    rows.push_back(std::move(cells));
  }
  return RenderTable(header, rows);
}

std::string DisplacementCsv(const std::vector<double>& rates,
                            const std::vector<DisplacementSummary>& summaries) {
  std::string out = CsvLine(
      {"rate_percent", "trial", "model", "base_rank", "new_rank", "delta"});
  for (size_t r = 0; r < rates.size(); ++r) {
    const auto& summary = summaries[r];
    for (size_t m = 0; m < summary.per_model.size(); ++m) {
      const auto& stats = summary.per_model[m];
      for (size_t t = 0; t < summary.deltas[m].size(); ++t) {
        const int delta = summary.deltas[m][t];
        out += CsvLine({FormatCompact(rates[r]), std::to_string(t),
                        stats.model.str(), std::to_string(stats.base_rank),
                        std::to_string(stats.base_rank - delta),
                        std::to_string(delta)});
      }
    }
  }
  return out;
}

}  // namespace arena
