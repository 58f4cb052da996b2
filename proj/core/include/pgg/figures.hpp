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

#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "pgg/game.hpp"
#include "pgg/table_io.hpp"

namespace pgg {

// Equal-width bin of x in [0, 1]; 1.0 falls in the last bin.
std::size_t bin_of(double x, std::size_t bins);

struct BinnedTable {
  std::vector<double> edges;         // bins + 1, strictly increasing
  std::vector<std::string> strata;   // stratum labels
  std::vector<std::vector<std::size_t>> counts;  // [stratum][bin]
  std::vector<std::vector<double>> means;        // NaN where count == 0

  std::size_t bins() const { return edges.empty() ? 0 : edges.size() - 1; }
  std::size_t total() const;
};

// Response of each CC agent at round t to the mean of the other seats at
// t - 1, stratified by whether its own t - 1 contribution reached X.
// Stratum 0 is "own >= X", stratum 1 is "own < X".
BinnedTable validation_curves(std::span<const EpisodeRecord> records,
                              std::size_t bins = 10);

struct ResponseShapeCheck {
  bool nondecreasing = false;  // both curves, within the inversion allowance
  bool dominance = false;      // high stratum above low in every shared bin
  std::vector<std::size_t> inversions;  // per stratum
  std::size_t compared_bins = 0;
};

// Applies the CC-shape criterion to bins with at least `min_count` samples.
ResponseShapeCheck check_response_shape(const BinnedTable& table,
                                        std::size_t min_count = 100,
                                        std::size_t max_inversions = 1);

struct PerRoundMeans {
  std::vector<double> cc;
  std::vector<double> planner;  // empty when the roster has no planner
};

PerRoundMeans per_round_means(std::span<const EpisodeRecord> records);

// Dense row-major matrix.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}
  double& at(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  double at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
};

// [t_max x bins] normalized histogram of CC contributions per round.
Matrix contribution_heatmap(std::span<const EpisodeRecord> records,
                            std::size_t bins = 20);

// Row-conditional frequencies P(bin of a_t | bin of a_{t-1}) over CC agents;
// rows without support are all zero.
Matrix transition_matrix(std::span<const EpisodeRecord> records,
                         std::size_t bins = 10);

// transition_matrix(treatment) - transition_matrix(baseline)
Matrix transition_diff(std::span<const EpisodeRecord> treatment,
                       std::span<const EpisodeRecord> baseline,
                       std::size_t bins = 10);

// Tabular forms written by the CLI.
Table validation_table(const BinnedTable& table);
Table per_round_table(const std::vector<std::pair<std::string, PerRoundMeans>>& groups);
Table matrix_table(const Matrix& m, const std::string& row_label,
                   std::size_t first_index = 0);
Matrix matrix_from_table(const Table& table);

}  // namespace pgg
