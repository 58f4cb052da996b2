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
#include <cstdint>
#include <functional>
#include <span>
#include <string_view>
#include <vector>

#include "pgg/game.hpp"
#include "pgg/policy_net.hpp"
#include "pgg/ppo_loss.hpp"
#include "pgg/rng.hpp"

namespace pgg {

enum class RewardKind { kSum, kProp };

std::string_view to_string(RewardKind kind);
RewardKind parse_reward_kind(std::string_view text);
AgentRole planner_role(RewardKind kind);

// Total contribution of the non-planner seats.
double reward_sum(std::span<const double> others);

// Fraction of non-planner seats contributing strictly more than `threshold`.
double reward_prop(std::span<const double> others, double threshold = 0.5);

double planner_reward(RewardKind kind, std::span<const double> others,
                      double threshold = 0.5);

enum class OptimizerKind { kAdam, kSgd };
enum class LrSchedule { kConstant, kLinear };

std::string_view to_string(OptimizerKind kind);
OptimizerKind parse_optimizer_kind(std::string_view text);
std::string_view to_string(LrSchedule schedule);
LrSchedule parse_lr_schedule(std::string_view text);

struct TrainConfig {
  RewardKind reward = RewardKind::kSum;
  std::size_t total_steps = 4'000'000;
  std::size_t batch_steps = 4'000;
  std::size_t minibatch_size = 128;
  std::size_t epochs_per_batch = 30;
  double clip_epsilon = 0.3;
  double gamma = 1.0;
  double learning_rate = 5e-5;
  double value_coeff = 0.5;
  double entropy_coeff = 0.0;
  bool normalize_advantages = true;
  OptimizerKind optimizer = OptimizerKind::kAdam;
  LrSchedule lr_schedule = LrSchedule::kConstant;
  double max_grad_norm = 0.0;  // 0 disables clipping
  std::vector<std::size_t> hidden = {64, 64};
  std::uint64_t seed = 0;
  // Rollout threads; results do not depend on it.
  std::size_t workers = 1;

  void validate(const GameConfig& game) const;
  std::size_t batches() const { return total_steps / batch_steps; }
};

struct RolloutBuffer {
  std::size_t obs_dim = 0;
  std::vector<double> observations;  // row-major [steps x obs_dim]
  std::vector<std::size_t> actions;
  std::vector<double> log_probs;
  std::vector<double> rewards;
  std::vector<double> values;
  std::vector<std::uint8_t> episode_end;  // 1 on the last step of an episode
  std::vector<double> returns;
  std::vector<double> advantages;

  std::size_t size() const { return actions.size(); }
  std::size_t episodes() const;
  // Sum of rewards per episode, in order.
  std::vector<double> episode_rewards() const;
  void append(const RolloutBuffer& other);
};

enum class PolicyMode { kSample, kGreedy };

// Planner seat driven by a policy network. Optionally records the data PPO
// needs for every decision it makes.
class PlannerAgent final : public Agent {
 public:
  PlannerAgent(const PolicyParameters& params, RewardKind kind,
               PolicyMode mode = PolicyMode::kSample,
               RolloutBuffer* recorder = nullptr)
      : params_(params), kind_(kind), mode_(mode), recorder_(recorder) {}

  AgentRole role() const override { return planner_role(kind_); }
  double act(const RoundContext& context, Rng& rng) override;
  void observe(const RoundResult&, std::size_t) override {}

 private:
  const PolicyParameters& params_;
  RewardKind kind_;
  PolicyMode mode_;
  RolloutBuffer* recorder_;
};

// Runs batch_steps / t_max episodes (planner in the last seat, fresh CC
// agents elsewhere). Episode e draws from rng.split(e).
RolloutBuffer collect_rollouts(const PolicyParameters& params,
                               const TrainConfig& config,
                               const GameConfig& game, const Rng& rng);

// Fills returns (discounted reward-to-go within each episode) and advantages
// (return - value, optionally normalized to mean 0 / std 1).
void compute_returns_advantages(RolloutBuffer& buffer, double gamma,
                                bool normalize = true);

class Optimizer {
 public:
  Optimizer(OptimizerKind kind, std::size_t size);
  void step(std::span<double> params, std::span<const double> grad,
            double learning_rate);

 private:
  OptimizerKind kind_;
  std::vector<double> m_;
  std::vector<double> v_;
  std::uint64_t t_ = 0;
};

struct TrainingLogEntry {
  std::size_t batch = 0;
  double mean_episode_reward = 0.0;
  double policy_loss = 0.0;
  double value_loss = 0.0;
  double entropy = 0.0;
  double wall_seconds = 0.0;
};

using TrainingLog = std::vector<TrainingLogEntry>;

struct TrainResult {
  PolicyParameters params;
  TrainingLog log;
};

using BatchCallback = std::function<void(const TrainingLogEntry&)>;

TrainResult train(const TrainConfig& config, const GameConfig& game,
                  const BatchCallback& on_batch = {});

}  // namespace pgg
