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

#include "pgg/ppo.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <sstream>

#include "pgg/cc_agent.hpp"
#include "pgg/error.hpp"
#include "pgg/parallel.hpp"

namespace pgg {

std::string_view to_string(RewardKind kind) {
  return kind == RewardKind::kSum ? "sum" : "prop";
}

RewardKind parse_reward_kind(std::string_view text) {
  if (text == "sum") return RewardKind::kSum;
  if (text == "prop") return RewardKind::kProp;
  throw ContractViolation("unknown reward kind '" + std::string(text) + "'");
}

AgentRole planner_role(RewardKind kind) {
  return kind == RewardKind::kSum ? AgentRole::kPlannerSum
                                  : AgentRole::kPlannerProp;
}

std::string_view to_string(OptimizerKind kind) {
  return kind == OptimizerKind::kAdam ? "adam" : "sgd";
}

OptimizerKind parse_optimizer_kind(std::string_view text) {
  if (text == "adam") return OptimizerKind::kAdam;
  if (text == "sgd") return OptimizerKind::kSgd;
  throw ContractViolation("unknown optimizer '" + std::string(text) + "'");
}

std::string_view to_string(LrSchedule schedule) {
  return schedule == LrSchedule::kConstant ? "constant" : "linear";
}

LrSchedule parse_lr_schedule(std::string_view text) {
  if (text == "constant") return LrSchedule::kConstant;
  if (text == "linear") return LrSchedule::kLinear;
  throw ContractViolation("unknown lr_schedule '" + std::string(text) + "'");
}

double reward_sum(std::span<const double> others) {
  return std::accumulate(others.begin(), others.end(), 0.0);
}

double reward_prop(std::span<const double> others, double threshold) {
  require(!others.empty(), "reward_prop needs at least one contribution");
  const auto above = std::count_if(others.begin(), others.end(),
                                   [&](double a) { return a > threshold; });
  return static_cast<double>(above) / static_cast<double>(others.size());
}

double planner_reward(RewardKind kind, std::span<const double> others,
                      double threshold) {
  return kind == RewardKind::kSum ? reward_sum(others)
                                  : reward_prop(others, threshold);
}

void TrainConfig::validate(const GameConfig& game) const {
  game.validate();
  require(batch_steps > 0 && batch_steps % game.t_max == 0,
          "batch_steps must be a positive multiple of t_max");
  require(total_steps >= batch_steps,
          "total_steps must cover at least one batch");
  require(minibatch_size > 0 && minibatch_size <= batch_steps,
          "minibatch_size must lie in [1, batch_steps]");
  require(epochs_per_batch > 0, "epochs_per_batch must be positive");
  require(clip_epsilon > 0.0 && clip_epsilon < 1.0,
          "clip_epsilon must lie in (0, 1)");
  require(gamma >= 0.0 && gamma <= 1.0, "gamma must lie in [0, 1]");
  require(learning_rate >= 0.0, "learning_rate must be >= 0");
  require(value_coeff >= 0.0 && entropy_coeff >= 0.0,
          "loss coefficients must be >= 0");
  require(max_grad_norm >= 0.0, "max_grad_norm must be >= 0");
  require(!hidden.empty(), "at least one hidden layer is required");
  require(workers >= 1, "workers must be >= 1");
}

std::size_t RolloutBuffer::episodes() const {
  return static_cast<std::size_t>(
      std::count(episode_end.begin(), episode_end.end(), std::uint8_t{1}));
}

std::vector<double> RolloutBuffer::episode_rewards() const {
  std::vector<double> totals;
  double running = 0.0;
  for (std::size_t i = 0; i < rewards.size(); ++i) {
    running += rewards[i];
    if (episode_end[i]) {
      totals.push_back(running);
      running = 0.0;
    }
  }
  return totals;
}

void RolloutBuffer::append(const RolloutBuffer& other) {
  if (obs_dim == 0) obs_dim = other.obs_dim;
  require(obs_dim == other.obs_dim, "observation size mismatch");
  auto cat = [](auto& dst, const auto& src) {
    dst.insert(dst.end(), src.begin(), src.end());
  };
  cat(observations, other.observations);
  cat(actions, other.actions);
  cat(log_probs, other.log_probs);
  cat(rewards, other.rewards);
  cat(values, other.values);
  cat(episode_end, other.episode_end);
  cat(returns, other.returns);
  cat(advantages, other.advantages);
}

double PlannerAgent::act(const RoundContext& context, Rng& rng) {
  const Observation obs = encode_observation(
      context.previous, context.round_index, *context.config);
  const PolicyOutput out = forward(params_, obs);
  const ActionSample choice = mode_ == PolicyMode::kSample
                                  ? sample_policy_action(out.probs, rng)
                                  : greedy_policy_action(out.probs);
  if (recorder_ != nullptr) {
    recorder_->obs_dim = obs.features.size();
    recorder_->observations.insert(recorder_->observations.end(),
                                   obs.features.begin(), obs.features.end());
    recorder_->actions.push_back(choice.index);
    recorder_->log_probs.push_back(choice.log_prob);
    recorder_->values.push_back(out.value);
  }
  return ActionGrid::value(choice.index, out.probs.size());
}

namespace {

RolloutBuffer collect_episode(const PolicyParameters& params,
                              const TrainConfig& config,
                              const GameConfig& game, Rng rng) {
  RolloutBuffer buffer;
  const CcParams cc = CcParams::from(game);
  std::vector<std::unique_ptr<Agent>> roster;
  for (std::size_t seat = 0; seat + 1 < game.n_players; ++seat) {
    roster.push_back(std::make_unique<CcAgent>(cc));
  }
  roster.push_back(std::make_unique<PlannerAgent>(
      params, config.reward, PolicyMode::kSample, &buffer));
  const EpisodeRecord record = run_episode(roster, game, rng);

  const std::size_t planner_seat = game.n_players - 1;
  std::vector<double> others;
  for (const RoundResult& round : record.rounds) {
    others.assign(round.contributions.begin(),
                  round.contributions.begin() +
                      static_cast<long>(planner_seat));
    buffer.rewards.push_back(
        planner_reward(config.reward, others, game.coop_threshold));
    buffer.episode_end.push_back(0);
  }
  buffer.episode_end.back() = 1;
  return buffer;
}

double clip_norm(std::vector<double>& grad, double max_norm) {
  double sq = 0.0;
  for (double g : grad) sq += g * g;
  const double norm = std::sqrt(sq);
  if (max_norm > 0.0 && norm > max_norm) {
    const double scale = max_norm / norm;
    for (double& g : grad) g *= scale;
  }
  return norm;
}

}  // namespace

RolloutBuffer collect_rollouts(const PolicyParameters& params,
                               const TrainConfig& config,
                               const GameConfig& game, const Rng& rng) {
  config.validate(game);
  const std::size_t episodes = config.batch_steps / game.t_max;
  std::vector<RolloutBuffer> parts(episodes);
  parallel_for(episodes, config.workers, [&](std::size_t e) {
    parts[e] = collect_episode(params, config, game, rng.split(e));
  });
  RolloutBuffer buffer;
  buffer.obs_dim = observation_size(game);
  for (const RolloutBuffer& part : parts) buffer.append(part);
  return buffer;
}

void compute_returns_advantages(RolloutBuffer& buffer, double gamma,
                                bool normalize) {
  const std::size_t n = buffer.size();
  require(buffer.rewards.size() == n && buffer.values.size() == n &&
              buffer.episode_end.size() == n,
          "rollout arrays have inconsistent lengths");
  require(n == 0 || buffer.episode_end.back() == 1,
          "rollout buffer ends mid-episode");
  buffer.returns.assign(n, 0.0);
  buffer.advantages.assign(n, 0.0);
  double running = 0.0;
  for (std::size_t i = n; i-- > 0;) {
    if (buffer.episode_end[i]) running = 0.0;
    running = buffer.rewards[i] + gamma * running;
    buffer.returns[i] = running;
    buffer.advantages[i] = running - buffer.values[i];
  }
  if (!normalize || n == 0) return;
  const double mean =
      std::accumulate(buffer.advantages.begin(), buffer.advantages.end(), 0.0) /
      static_cast<double>(n);
  double var = 0.0;
  for (double a : buffer.advantages) var += (a - mean) * (a - mean);
  const double std_dev = std::sqrt(var / static_cast<double>(n));
  const double scale = std_dev > 1e-12 ? 1.0 / std_dev : 1.0;
  for (double& a : buffer.advantages) a = (a - mean) * scale;
}

Optimizer::Optimizer(OptimizerKind kind, std::size_t size) : kind_(kind) {
  if (kind_ == OptimizerKind::kAdam) {
    m_.assign(size, 0.0);
    v_.assign(size, 0.0);
  }
}

void Optimizer::step(std::span<double> params, std::span<const double> grad,
                     double learning_rate) {
  require(params.size() == grad.size(), "gradient size mismatch");
  if (kind_ == OptimizerKind::kSgd) {
    for (std::size_t i = 0; i < params.size(); ++i) {
      params[i] -= learning_rate * grad[i];
    }
    return;
  }
  constexpr double kBeta1 = 0.9;
  constexpr double kBeta2 = 0.999;
  constexpr double kEps = 1e-8;
  ++t_;
  const double c1 = 1.0 - std::pow(kBeta1, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(kBeta2, static_cast<double>(t_));
  for (std::size_t i = 0; i < params.size(); ++i) {
    m_[i] = kBeta1 * m_[i] + (1.0 - kBeta1) * grad[i];
    v_[i] = kBeta2 * v_[i] + (1.0 - kBeta2) * grad[i] * grad[i];
    params[i] -= learning_rate * (m_[i] / c1) / (std::sqrt(v_[i] / c2) + kEps);
  }
}

TrainResult train(const TrainConfig& config, const GameConfig& game,
                  const BatchCallback& on_batch) {
  config.validate(game);
  const Rng master(config.seed);
  Rng init_rng = master.split(0);
  const Rng rollout_root = master.split(1);
  const Rng shuffle_root = master.split(2);

  TrainResult result;
  result.params = PolicyParameters::initialize(
      NetShape{observation_size(game), config.hidden, ActionGrid::kSize},
      init_rng);
  PolicyParameters& params = result.params;
  Optimizer optimizer(config.optimizer, params.size());
  const LossCoefficients coeffs{config.clip_epsilon, config.value_coeff,
                                config.entropy_coeff};
  const std::size_t batches = config.batches();

  std::vector<std::size_t> order;
  Minibatch mb;
  for (std::size_t b = 0; b < batches; ++b) {
    const auto started = std::chrono::steady_clock::now();
    RolloutBuffer buffer =
        collect_rollouts(params, config, game, rollout_root.split(b));
    compute_returns_advantages(buffer, config.gamma,
                               config.normalize_advantages);

    TrainingLogEntry entry;
    entry.batch = b;
    const std::vector<double> totals = buffer.episode_rewards();
    entry.mean_episode_reward =
        std::accumulate(totals.begin(), totals.end(), 0.0) /
        static_cast<double>(totals.size());

    double lr = config.learning_rate;
    if (config.lr_schedule == LrSchedule::kLinear) {
      lr *= 1.0 - static_cast<double>(b) / static_cast<double>(batches);
    }

    const std::size_t n = buffer.size();
    const std::size_t dim = buffer.obs_dim;
    order.resize(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng shuffle_rng = shuffle_root.split(b);
    std::size_t updates = 0;
    for (std::size_t epoch = 0; epoch < config.epochs_per_batch; ++epoch) {
      for (std::size_t i = n; i > 1; --i) {
        std::swap(order[i - 1], order[shuffle_rng.uniform_index(i)]);
      }
      for (std::size_t start = 0; start < n; start += config.minibatch_size) {
        const std::size_t stop = std::min(n, start + config.minibatch_size);
        mb.clear();
        for (std::size_t j = start; j < stop; ++j) {
          const std::size_t s = order[j];
          mb.observations.insert(
              mb.observations.end(),
              buffer.observations.begin() + static_cast<long>(s * dim),
              buffer.observations.begin() + static_cast<long>((s + 1) * dim));
          mb.actions.push_back(buffer.actions[s]);
          mb.old_log_probs.push_back(buffer.log_probs[s]);
          mb.advantages.push_back(buffer.advantages[s]);
          mb.returns.push_back(buffer.returns[s]);
        }
        GradientResult g;
        try {
          g = backward(params, mb, coeffs);
        } catch (const NumericalError& e) {
          std::ostringstream msg;
          msg << e.what() << " (batch " << b << ", epoch " << epoch
              << ", minibatch offset " << start << ", last losses: policy "
              << entry.policy_loss / std::max<std::size_t>(updates, 1)
              << ", value "
              << entry.value_loss / std::max<std::size_t>(updates, 1) << ")";
          throw NumericalError(msg.str());
        }
        clip_norm(g.gradient, config.max_grad_norm);
        optimizer.step(params.values(), g.gradient, lr);
        entry.policy_loss += g.loss.policy_loss;
        entry.value_loss += g.loss.value_loss;
        entry.entropy += g.loss.entropy;
        ++updates;
      }
    }
    const double inv = 1.0 / static_cast<double>(updates);
    entry.policy_loss *= inv;
    entry.value_loss *= inv;
    entry.entropy *= inv;
    entry.wall_seconds = std::chrono::duration<double>(
                             std::chrono::steady_clock::now() - started)
                             .count();
    result.log.push_back(entry);
    if (on_batch) on_batch(entry);
  }
  return result;
}

}  // namespace pgg
