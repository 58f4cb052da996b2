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
#include <filesystem>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "pgg/game.hpp"
#include "pgg/rng.hpp"

namespace pgg {

// Discretized planner actions: index i maps to contribution i * step.
struct ActionGrid {
  static constexpr double kStep = 0.01;
  static constexpr std::size_t kSize = 101;

  static double value(std::size_t index, std::size_t size = kSize);
  // Nearest grid index for a contribution in [0, 1].
  static std::size_t index_of(double contribution, std::size_t size = kSize);
};

// Previous-round contributions of every seat followed by t / t_max.
struct Observation {
  std::vector<double> features;
};

Observation encode_observation(const RoundResult* last_round,
                               std::size_t round_index,
                               const GameConfig& config);

inline std::size_t observation_size(const GameConfig& config) {
  return config.n_players + 1;
}

struct NetShape {
  std::size_t input_dim = 5;
  std::vector<std::size_t> hidden = {64, 64};
  std::size_t n_actions = ActionGrid::kSize;

  friend bool operator==(const NetShape&, const NetShape&) = default;
};

// Dense layer location inside the flat parameter array. Weights are stored
// row-major as [rows = fan_out, cols = fan_in], followed by `rows` biases.
struct LayerSlice {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::size_t weight_offset = 0;
  std::size_t bias_offset = 0;

  friend bool operator==(const LayerSlice&, const LayerSlice&) = default;
};

// Weights of the shared tanh trunk plus the policy-logit and value heads.
// Layer order: hidden layers, then policy head, then value head.
class PolicyParameters {
 public:
  static constexpr int kFormatVersion = 1;

  PolicyParameters() = default;
  explicit PolicyParameters(NetShape shape);  // all zeros

  // Fan-in scaled uniform init for the trunk and value head; policy head zero
  // so the initial policy is exactly uniform.
  static PolicyParameters initialize(NetShape shape, Rng& rng);

  const NetShape& shape() const { return shape_; }
  const std::vector<LayerSlice>& layers() const { return layers_; }
  const LayerSlice& policy_head() const { return layers_[layers_.size() - 2]; }
  const LayerSlice& value_head() const { return layers_.back(); }

  std::span<double> values() { return values_; }
  std::span<const double> values() const { return values_; }
  std::size_t size() const { return values_.size(); }

  friend bool operator==(const PolicyParameters&,
                         const PolicyParameters&) = default;

 private:
  NetShape shape_;
  std::vector<LayerSlice> layers_;
  std::vector<double> values_;
};

struct PolicyOutput {
  std::vector<double> probs;
  std::vector<double> log_probs;
  double value = 0.0;
  double entropy = 0.0;
};

// Throws NumericalError on non-finite intermediates.
PolicyOutput forward(const PolicyParameters& params, const Observation& obs);

struct ActionSample {
  std::size_t index = 0;
  double log_prob = 0.0;
};

ActionSample sample_policy_action(std::span<const double> probs, Rng& rng);
ActionSample greedy_policy_action(std::span<const double> probs);

// Structure-of-arrays minibatch; observations are row-major [size x input].
struct Minibatch {
  std::vector<double> observations;
  std::vector<std::size_t> actions;
  std::vector<double> old_log_probs;
  std::vector<double> advantages;
  std::vector<double> returns;

  std::size_t size() const { return actions.size(); }
  void clear();
};

struct LossCoefficients {
  double clip_epsilon = 0.3;
  double value_coeff = 0.5;
  double entropy_coeff = 0.0;
};

struct LossComponents {
  double policy_loss = 0.0;  // -mean(surrogate)
  double value_loss = 0.0;   // mean((value - return)^2)
  double entropy = 0.0;      // mean policy entropy
  double total = 0.0;
};

// total = policy_loss + value_coeff * value_loss - entropy_coeff * entropy
LossComponents evaluate_loss(const PolicyParameters& params,
                             const Minibatch& batch,
                             const LossCoefficients& coeffs);

struct GradientResult {
  std::vector<double> gradient;  // aligned with PolicyParameters::values()
  LossComponents loss;
};

// Mean-reduced analytic gradient of `total`. Throws NumericalError on
// non-finite loss or gradient.
GradientResult backward(const PolicyParameters& params, const Minibatch& batch,
                        const LossCoefficients& coeffs);

// Model file: versioned JSON with shape metadata and row-major weights.
struct ModelFile {
  PolicyParameters params;
  std::string reward_kind;
  double action_step = ActionGrid::kStep;
  // Resolved training/game configuration, as ordered key/value text.
  std::vector<std::pair<std::string, std::string>> config;
};

std::string model_to_json(const ModelFile& model);
ModelFile model_from_json(const std::string& text);
void save_model(const ModelFile& model, const std::filesystem::path& path);
ModelFile load_model(const std::filesystem::path& path);

}  // namespace pgg
