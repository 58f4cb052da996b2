// Copyright 2026 The pgg-nudge Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "pgg/figures.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "pgg/error.hpp"

namespace pgg {

std::size_t bin_of(double x, std::size_t bins) {
  require(bins > 0, "bin count must be positive");
  if (!(x > 0.0)) return 0;
  const auto b = static_cast<std::size_t>(x * static_cast<double>(bins));
  return std::min(b, bins - 1);
}

std::size_t BinnedTable::total() const {
  std::size_t n = 0;
  for (const auto& row : counts) n = std::accumulate(row.begin(), row.end(), n);
  return n;
}

BinnedTable validation_curves(std::span<const EpisodeRecord> records,
                              std::size_t bins) {
  require(bins > 0, "bin count must be positive");
  BinnedTable table;
  table.edges.resize(bins + 1);
  for (std::size_t i = 0; i <= bins; ++i) {
    table.edges[i] = static_cast<double>(i) / static_cast<double>(bins);
  }
  table.strata = {"own_prev_ge_x", "own_prev_lt_x"};
  table.counts.assign(2, std::vector<std::size_t>(bins, 0));
  std::vector<std::vector<double>> sums(2, std::vector<double>(bins, 0.0));

  for (const EpisodeRecord& record : records) {
    const double x_threshold = record.config.threshold_x;
    const std::size_t n = record.roster.size();
    require(n >= 2, "validation curves need at least two seats");
    for (std::size_t t = 1; t < record.rounds.size(); ++t) {
      const auto& prev = record.rounds[t - 1].contributions;
      const auto& cur = record.rounds[t].contributions;
      const double prev_total = std::accumulate(prev.begin(), prev.end(), 0.0);
      for (std::size_t seat = 0; seat < n; ++seat) {
        if (record.roster[seat] != AgentRole::kCc) continue;
        const double others =
            (prev_total - prev[seat]) / static_cast<double>(n - 1);
        const std::size_t stratum = prev[seat] >= x_threshold ? 0 : 1;
        const std::size_t b = bin_of(others, bins);
        ++table.counts[stratum][b];
        sums[stratum][b] += cur[seat];
      }
    }
  }
  table.means.assign(2, std::vector<double>(bins, 0.0));
  for (std::size_t s = 0; s < 2; ++s) {
    for (std::size_t b = 0; b < bins; ++b) {
      table.means[s][b] =
          table.counts[s][b] > 0
              ? sums[s][b] / static_cast<double>(table.counts[s][b])
              : std::numeric_limits<double>::quiet_NaN();
    }
  }
  return table;
}

ResponseShapeCheck check_response_shape(const BinnedTable& table,
                                        std::size_t min_count,
                                        std::size_t max_inversions) {
  require(table.strata.size() == 2, "expected two strata");
  ResponseShapeCheck check;
  check.inversions.assign(2, 0);
  for (std::size_t s = 0; s < 2; ++s) {
    double last = -std::numeric_limits<double>::infinity();
    for (std::size_t b = 0; b < table.bins(); ++b) {
      if (table.counts[s][b] < min_count) continue;
      if (table.means[s][b] < last) ++check.inversions[s];
      last = table.means[s][b];
    }
  }
  check.nondecreasing = check.inversions[0] <= max_inversions &&
                        check.inversions[1] <= max_inversions;
  check.dominance = true;
  for (std::size_t b = 0; b < table.bins(); ++b) {
    if (table.counts[0][b] < min_count || table.counts[1][b] < min_count) {
      continue;
    }
    ++check.compared_bins;
    if (!(table.means[0][b] > table.means[1][b])) check.dominance = false;
  }
  return check;
}

PerRoundMeans per_round_means(std::span<const EpisodeRecord> records) {
  PerRoundMeans out;
  if (records.empty()) return out;
  const auto& roster = records.front().roster;
  const std::size_t rounds = records.front().rounds.size();
  std::size_t cc_seats = 0;
  for (AgentRole r : roster) cc_seats += r == AgentRole::kCc;
  const std::size_t planner_seats = roster.size() - cc_seats;
  if (cc_seats > 0) out.cc.assign(rounds, 0.0);
  if (planner_seats > 0) out.planner.assign(rounds, 0.0);
  for (const EpisodeRecord& record : records) {
    require(record.roster == roster, "per-round means need identical rosters");
    require(record.rounds.size() == rounds, "per-round means need equal lengths");
    for (std::size_t t = 0; t < rounds; ++t) {
      for (std::size_t seat = 0; seat < roster.size(); ++seat) {
        (roster[seat] == AgentRole::kCc ? out.cc : out.planner)[t] +=
            record.rounds[t].contributions[seat];
      }
    }
  }
  const auto games = static_cast<double>(records.size());
  for (double& v : out.cc) v /= games * static_cast<double>(cc_seats);
  for (double& v : out.planner) v /= games * static_cast<double>(planner_seats);
  return out;
}

Matrix contribution_heatmap(std::span<const EpisodeRecord> records,
                            std::size_t bins) {
  require(bins > 0, "bin count must be positive");
  std::size_t rounds = 0;
  for (const EpisodeRecord& r : records) rounds = std::max(rounds, r.rounds.size());
  Matrix m(rounds, bins);
  for (const EpisodeRecord& record : records) {
    for (std::size_t t = 0; t < record.rounds.size(); ++t) {
      for (std::size_t seat = 0; seat < record.roster.size(); ++seat) {
        if (record.roster[seat] != AgentRole::kCc) continue;
        m.at(t, bin_of(record.rounds[t].contributions[seat], bins)) += 1.0;
      }
    }
  }
  for (std::size_t t = 0; t < m.rows; ++t) {
    double total = 0.0;
    for (std::size_t b = 0; b < bins; ++b) total += m.at(t, b);
    if (total > 0.0) {
      for (std::size_t b = 0; b < bins; ++b) m.at(t, b) /= total;
    }
  }
  return m;
}

Matrix transition_matrix(std::span<const EpisodeRecord> records,
                         std::size_t bins) {
  require(bins > 0, "bin count must be positive");
  Matrix m(bins, bins);
  for (const EpisodeRecord& record : records) {
    for (std::size_t t = 1; t < record.rounds.size(); ++t) {
      for (std::size_t seat = 0; seat < record.roster.size(); ++seat) {
        if (record.roster[seat] != AgentRole::kCc) continue;
        m.at(bin_of(record.rounds[t - 1].contributions[seat], bins),
             bin_of(record.rounds[t].contributions[seat], bins)) += 1.0;
      }
    }
  }
  for (std::size_t r = 0; r < bins; ++r) {
    double total = 0.0;
    for (std::size_t c = 0; c < bins; ++c) total += m.at(r, c);
    if (total > 0.0) {
      for (std::size_t c = 0; c < bins; ++c) m.at(r, c) /= total;
    }
  }
  return m;
}

Matrix transition_diff(std::span<const EpisodeRecord> treatment,
                       std::span<const EpisodeRecord> baseline,
                       std::size_t bins) {
  require(!treatment.empty() && !baseline.empty(),
          "transition_diff needs two non-empty collections");
  Matrix diff = transition_matrix(treatment, bins);
  const Matrix base = transition_matrix(baseline, bins);
  for (std::size_t i = 0; i < diff.data.size(); ++i) diff.data[i] -= base.data[i];
  return diff;
}

Table validation_table(const BinnedTable& table) {
  std::vector<std::string> columns = {"bin", "bin_low", "bin_high"};
  for (const auto& s : table.strata) {
    columns.push_back(s + "_count");
    columns.push_back(s + "_mean");
  }
  Table out(columns);
  for (std::size_t b = 0; b < table.bins(); ++b) {
    Table::Row row;
    row << b << table.edges[b] << table.edges[b + 1];
    for (std::size_t s = 0; s < table.strata.size(); ++s) {
      row << table.counts[s][b] << table.means[s][b];
    }
    out.add(std::move(row));
  }
  return out;
}

Table per_round_table(
    const std::vector<std::pair<std::string, PerRoundMeans>>& groups) {
  std::vector<std::string> columns = {"round"};
  std::size_t rounds = 0;
  for (const auto& [name, means] : groups) {
    columns.push_back(name + "_cc_mean");
    if (!means.planner.empty()) columns.push_back(name + "_planner_mean");
    rounds = std::max(rounds, means.cc.size());
  }
  Table out(columns);
  for (std::size_t t = 0; t < rounds; ++t) {
    Table::Row row;
    row << t + 1;
    for (const auto& [name, means] : groups) {
      row << (t < means.cc.size() ? means.cc[t]
                                  : std::numeric_limits<double>::quiet_NaN());
      if (!means.planner.empty()) row << means.planner[t];
    }
    out.add(std::move(row));
  }
  return out;
}

Table matrix_table(const Matrix& m, const std::string& row_label,
                   std::size_t first_index) {
  std::vector<std::string> columns = {row_label};
  for (std::size_t c = 0; c < m.cols; ++c) {
    columns.push_back("bin_" + std::to_string(c));
  }
  Table out(columns);
  for (std::size_t r = 0; r < m.rows; ++r) {
    Table::Row row;
    row << r + first_index;
    for (std::size_t c = 0; c < m.cols; ++c) row << m.at(r, c);
    out.add(std::move(row));
  }
  return out;
}

Matrix matrix_from_table(const Table& table) {
  require(table.columns().size() >= 2, "matrix table needs value columns");
  Matrix m(table.rows().size(), table.columns().size() - 1);
  for (std::size_t r = 0; r < m.rows; ++r) {
    for (std::size_t c = 0; c < m.cols; ++c) {
      m.at(r, c) = parse_number(table.rows()[r][c + 1], r + 2);
    }
  }
  return m;
}

}  // namespace pgg
