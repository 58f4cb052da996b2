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
#include <vector>

#include "pgg/game.hpp"

namespace pgg {

enum class PValueMethod {
  kAuto,    // exact when n_a + n_b <= kExactLimit, otherwise normal
  kExact,   // full enumeration of rank assignments
  kNormal,  // tie-corrected normal approximation with continuity correction
};

struct MannWhitneyResult {
  double u = 0.0;  // U of sample_a: rank sum of a minus n_a (n_a + 1) / 2
  double p_value = 1.0;
  bool exact = false;
};

inline constexpr std::size_t kExactLimit = 16;

// Two-sided Mann-Whitney U test with midranks for ties.
MannWhitneyResult mann_whitney_u(std::span<const double> sample_a,
                                 std::span<const double> sample_b,
                                 PValueMethod method = PValueMethod::kAuto);

// 100 * (treatment - baseline) / baseline
double percentage_change(double baseline_mean, double treatment_mean);

// Per-game Table-1 style metrics.
struct GameMetrics {
  double sum_contribution = 0.0;     // all seats, all rounds
  double prop_over_threshold = 0.0;  // share of all contributions > threshold
  double cc_sum_contribution = 0.0;
  double cc_prop_over_threshold = 0.0;
};

GameMetrics game_metrics(const EpisodeRecord& record, double coop_threshold);

struct EvalSummary {
  std::size_t games = 0;
  double sum_contribution_mean = 0.0;
  double prop_over_threshold_mean = 0.0;
  double cc_sum_contribution_mean = 0.0;
  double cc_prop_over_threshold_mean = 0.0;
  // Per-round means over CC seats and over planner seats (empty if none).
  std::vector<double> cc_round_means;
  std::vector<double> planner_round_means;
  std::vector<GameMetrics> per_game;
};

// Requires a non-empty collection with identical rosters.
EvalSummary summarize(std::span<const EpisodeRecord> records,
                      double coop_threshold);

}  // namespace pgg
