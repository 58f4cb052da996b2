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
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pgg/rng.hpp"

namespace pgg {

// Which of the two printed readings of the Bush-Mosteller defect cases to use.
enum class BmForm { kBounded, kAsPrintedWithClamp };

std::string_view to_string(BmForm form);
BmForm parse_bm_form(std::string_view text);

// Game and conditional-cooperator constants.
struct GameConfig {
  std::size_t n_players = 4;
  std::size_t t_max = 25;
  double k = 1.6;
  double aspiration = 1.0;   // A
  double threshold_x = 0.4;  // X
  double beta = 0.4;
  double sigma = 0.2;
  double coop_threshold = 0.5;
  BmForm bm_form = BmForm::kBounded;

  // Throws ContractViolation when any invariant is broken.
  void validate() const;

  friend bool operator==(const GameConfig&, const GameConfig&) = default;
};

struct RoundResult {
  std::size_t round_index = 0;  // 1-based
  std::vector<double> contributions;
  std::vector<double> payoffs;

  friend bool operator==(const RoundResult&, const RoundResult&) = default;
};

enum class AgentRole { kCc, kPlannerSum, kPlannerProp };

std::string_view to_string(AgentRole role);
AgentRole parse_agent_role(std::string_view text);
inline bool is_planner(AgentRole role) { return role != AgentRole::kCc; }

struct EpisodeRecord {
  GameConfig config;
  std::vector<AgentRole> roster;
  std::vector<RoundResult> rounds;

  friend bool operator==(const EpisodeRecord&, const EpisodeRecord&) = default;
};

// What an agent sees when it is asked to move.
struct RoundContext {
  std::size_t round_index = 0;
  std::size_t seat = 0;
  const GameConfig* config = nullptr;
  // Outcome of the previous round; null in round 1.
  const RoundResult* previous = nullptr;
};

class Agent {
 public:
  virtual ~Agent() = default;
  virtual AgentRole role() const = 0;
  // Contribution for this round, in [0, 1].
  virtual double act(const RoundContext& context, Rng& rng) = 0;
  // Called with the public outcome of every round; `seat` identifies this
  // agent's own entries.
  virtual void observe(const RoundResult& result, std::size_t seat) = 0;
};

// payoff_i = (k / N) * sum_j a_j + (1 - a_i)
std::vector<double> compute_payoffs(std::span<const double> contributions,
                                    const GameConfig& config);

RoundResult step(std::size_t round_index, std::span<const double> actions,
                 const GameConfig& config);

// Plays t_max rounds. Agents act in seat order on a shared stream.
EpisodeRecord run_episode(std::span<Agent* const> agents,
                          const GameConfig& config, Rng& rng);

// Convenience overload for owning rosters.
EpisodeRecord run_episode(const std::vector<std::unique_ptr<Agent>>& agents,
                          const GameConfig& config, Rng& rng);

}  // namespace pgg
