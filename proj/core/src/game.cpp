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

#include "pgg/game.hpp"

#include <numeric>

#include "pgg/error.hpp"

namespace pgg {

std::string_view to_string(BmForm form) {
  return form == BmForm::kBounded ? "bounded" : "as_printed_with_clamp";
}

BmForm parse_bm_form(std::string_view text) {
  if (text == "bounded") return BmForm::kBounded;
  if (text == "as_printed_with_clamp") return BmForm::kAsPrintedWithClamp;
  throw ContractViolation("unknown bm_form '" + std::string(text) + "'");
}

std::string_view to_string(AgentRole role) {
  switch (role) {
    case AgentRole::kCc:
      return "cc";
    case AgentRole::kPlannerSum:
      return "planner-sum";
    case AgentRole::kPlannerProp:
      return "planner-prop";
  }
  return "?";
}

AgentRole parse_agent_role(std::string_view text) {
  if (text == "cc") return AgentRole::kCc;
  if (text == "planner-sum") return AgentRole::kPlannerSum;
  if (text == "planner-prop") return AgentRole::kPlannerProp;
  throw ContractViolation("unknown agent role '" + std::string(text) + "'");
}

void GameConfig::validate() const {
  require(n_players >= 2, "n_players must be >= 2");
  require(t_max >= 1, "t_max must be >= 1");
  require(k > 0.0, "k must be > 0");
  require(sigma >= 0.0, "sigma must be >= 0");
  require(beta >= 0.0, "beta must be >= 0");
  require(threshold_x >= 0.0 && threshold_x <= 1.0,
          "threshold_x must lie in [0, 1]");
  require(coop_threshold >= 0.0 && coop_threshold <= 1.0,
          "coop_threshold must lie in [0, 1]");
}

std::vector<double> compute_payoffs(std::span<const double> contributions,
                                    const GameConfig& config) {
  require(contributions.size() == config.n_players,
          "contribution vector length must equal n_players");
  for (double a : contributions) {
    require(a >= 0.0 && a <= 1.0, "contribution outside [0, 1]");
  }
  const double pool = std::accumulate(contributions.begin(),
                                      contributions.end(), 0.0);
  const double share = config.k / static_cast<double>(config.n_players) * pool;
  std::vector<double> payoffs(contributions.size());
  for (std::size_t i = 0; i < contributions.size(); ++i) {
    payoffs[i] = share + (1.0 - contributions[i]);
  }
  return payoffs;
}

RoundResult step(std::size_t round_index, std::span<const double> actions,
                 const GameConfig& config) {
  require(round_index >= 1 && round_index <= config.t_max,
          "round index outside [1, t_max]");
  RoundResult result;
  result.round_index = round_index;
  result.payoffs = compute_payoffs(actions, config);
  result.contributions.assign(actions.begin(), actions.end());
  return result;
}

EpisodeRecord run_episode(std::span<Agent* const> agents,
                          const GameConfig& config, Rng& rng) {
  require(agents.size() == config.n_players,
          "roster size must equal n_players");
  EpisodeRecord record;
  record.config = config;
  record.roster.reserve(agents.size());
  for (const Agent* agent : agents) {
    require(agent != nullptr, "null agent in roster");
    record.roster.push_back(agent->role());
  }
  record.rounds.reserve(config.t_max);

  std::vector<double> actions(agents.size());
  for (std::size_t t = 1; t <= config.t_max; ++t) {
    const RoundResult* previous =
        record.rounds.empty() ? nullptr : &record.rounds.back();
    for (std::size_t seat = 0; seat < agents.size(); ++seat) {
      const RoundContext context{t, seat, &config, previous};
      actions[seat] = agents[seat]->act(context, rng);
    }
    record.rounds.push_back(step(t, actions, config));
    for (std::size_t seat = 0; seat < agents.size(); ++seat) {
      agents[seat]->observe(record.rounds.back(), seat);
    }
  }
  return record;
}

EpisodeRecord run_episode(const std::vector<std::unique_ptr<Agent>>& agents,
                          const GameConfig& config, Rng& rng) {
  std::vector<Agent*> raw;
  raw.reserve(agents.size());
  for (const auto& agent : agents) raw.push_back(agent.get());
  return run_episode(std::span<Agent* const>(raw), config, rng);
}

}  // namespace pgg
