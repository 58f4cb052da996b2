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

#include "pgg/stats.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <numeric>

#include "pgg/error.hpp"

namespace pgg {

namespace {

struct Ranking {
  std::vector<double> ranks;  // midranks, pooled order: a then b
  double tie_term = 0.0;      // sum over tie groups of (t^3 - t)
  // An even-sized tie group puts U on a half-integer lattice.
  bool half_step = false;
};

Ranking midranks(std::span<const double> a, std::span<const double> b) {
  const std::size_t n = a.size() + b.size();
  std::vector<double> pooled(a.begin(), a.end());
  pooled.insert(pooled.end(), b.begin(), b.end());
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return pooled[x] < pooled[y];
  });
  Ranking r;
  r.ranks.assign(n, 0.0);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i + 1;
    while (j < n && pooled[order[j]] == pooled[order[i]]) ++j;
    const double mid = 0.5 * static_cast<double>(i + 1 + j);
    for (std::size_t k = i; k < j; ++k) r.ranks[order[k]] = mid;
    const auto t = static_cast<double>(j - i);
    r.tie_term += t * t * t - t;
    if ((j - i) % 2 == 0) r.half_step = true;
    i = j;
  }
  return r;
}

double exact_p(const Ranking& r, std::size_t n_a, double u_obs) {
  const std::size_t n = r.ranks.size();
  const double offset = 0.5 * static_cast<double>(n_a) * (n_a + 1);
  const double mean = 0.5 * static_cast<double>(n_a) *
                      static_cast<double>(n - n_a);
  const double observed_dev = std::abs(u_obs - mean);
  std::uint64_t extreme = 0;
  std::uint64_t total = 0;
  const std::uint32_t limit = std::uint32_t{1} << n;
  for (std::uint32_t mask = 0; mask < limit; ++mask) {
    if (static_cast<std::size_t>(std::popcount(mask)) != n_a) continue;
    double rank_sum = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      if (mask & (std::uint32_t{1} << k)) rank_sum += r.ranks[k];
    }
    ++total;
    if (std::abs(rank_sum - offset - mean) >= observed_dev - 1e-9) ++extreme;
  }
  return static_cast<double>(extreme) / static_cast<double>(total);
}

double normal_p(const Ranking& r, std::size_t n_a, std::size_t n_b,
                double u_obs) {
  const double na = static_cast<double>(n_a);
  const double nb = static_cast<double>(n_b);
  const double n = na + nb;
  const double mean = 0.5 * na * nb;
  double var = na * nb / 12.0 * (n + 1.0);
  if (n > 1.0) var -= na * nb * r.tie_term / (12.0 * n * (n - 1.0));
  if (var <= 0.0) return 1.0;
  // Continuity correction of half the lattice spacing of U.
  const double correction = r.half_step ? 0.25 : 0.5;
  const double z =
      std::max(0.0, std::abs(u_obs - mean) - correction) / std::sqrt(var);
  return std::min(1.0, std::erfc(z / std::sqrt(2.0)));
}

}  // namespace

MannWhitneyResult mann_whitney_u(std::span<const double> sample_a,
                                 std::span<const double> sample_b,
                                 PValueMethod method) {
  require(!sample_a.empty() && !sample_b.empty(),
          "Mann-Whitney U needs two non-empty samples");
  const Ranking r = midranks(sample_a, sample_b);
  const std::size_t n_a = sample_a.size();
  const double rank_sum_a =
      std::accumulate(r.ranks.begin(), r.ranks.begin() + static_cast<long>(n_a), 0.0);

  MannWhitneyResult out;
  out.u = rank_sum_a - 0.5 * static_cast<double>(n_a) * (n_a + 1);
  const std::size_t n = n_a + sample_b.size();
  bool exact = method == PValueMethod::kExact ||
               (method == PValueMethod::kAuto && n <= kExactLimit);
  if (exact) {
    require(n <= 24, "exact Mann-Whitney enumeration limited to 24 values");
    out.p_value = exact_p(r, n_a, out.u);
  } else {
    out.p_value = normal_p(r, n_a, sample_b.size(), out.u);
  }
  out.exact = exact;
  return out;
}

double percentage_change(double baseline_mean, double treatment_mean) {
  require(baseline_mean != 0.0, "percentage change from a zero baseline");
  return 100.0 * (treatment_mean - baseline_mean) / baseline_mean;
}

GameMetrics game_metrics(const EpisodeRecord& record, double coop_threshold) {
  GameMetrics m;
  std::size_t all = 0, all_above = 0, cc = 0, cc_above = 0;
  for (const RoundResult& round : record.rounds) {
    for (std::size_t seat = 0; seat < round.contributions.size(); ++seat) {
      const double a = round.contributions[seat];
      const bool above = a > coop_threshold;
      m.sum_contribution += a;
      ++all;
      all_above += above;
      if (record.roster.at(seat) == AgentRole::kCc) {
        m.cc_sum_contribution += a;
        ++cc;
        cc_above += above;
      }
    }
  }
  if (all > 0) m.prop_over_threshold = static_cast<double>(all_above) / all;
  if (cc > 0) m.cc_prop_over_threshold = static_cast<double>(cc_above) / cc;
  return m;
}

EvalSummary summarize(std::span<const EpisodeRecord> records,
                      double coop_threshold) {
  require(!records.empty(), "summarize needs at least one game");
  const std::vector<AgentRole>& roster = records.front().roster;
  const std::size_t rounds = records.front().rounds.size();
  for (const EpisodeRecord& r : records) {
    require(r.roster == roster, "summarize requires identical rosters");
    require(r.rounds.size() == rounds, "summarize requires equal game lengths");
  }

  EvalSummary s;
  s.games = records.size();
  s.per_game.reserve(records.size());
  for (const EpisodeRecord& r : records) {
    s.per_game.push_back(game_metrics(r, coop_threshold));
    const GameMetrics& m = s.per_game.back();
    s.sum_contribution_mean += m.sum_contribution;
    s.prop_over_threshold_mean += m.prop_over_threshold;
    s.cc_sum_contribution_mean += m.cc_sum_contribution;
    s.cc_prop_over_threshold_mean += m.cc_prop_over_threshold;
  }
  const double inv = 1.0 / static_cast<double>(records.size());
  s.sum_contribution_mean *= inv;
  s.prop_over_threshold_mean *= inv;
  s.cc_sum_contribution_mean *= inv;
  s.cc_prop_over_threshold_mean *= inv;

  const auto cc_seats = static_cast<std::size_t>(
      std::count(roster.begin(), roster.end(), AgentRole::kCc));
  const std::size_t planner_seats = roster.size() - cc_seats;
  s.cc_round_means.assign(cc_seats > 0 ? rounds : 0, 0.0);
  s.planner_round_means.assign(planner_seats > 0 ? rounds : 0, 0.0);
  for (const EpisodeRecord& r : records) {
    for (std::size_t t = 0; t < rounds; ++t) {
      for (std::size_t seat = 0; seat < roster.size(); ++seat) {
        const double a = r.rounds[t].contributions[seat];
        if (roster[seat] == AgentRole::kCc) {
          s.cc_round_means[t] += a;
        } else {
          s.planner_round_means[t] += a;
        }
      }
    }
  }
  for (double& v : s.cc_round_means) v *= inv / static_cast<double>(cc_seats);
  for (double& v : s.planner_round_means) {
    v *= inv / static_cast<double>(planner_seats);
  }
  return s;
}

}  // namespace pgg
