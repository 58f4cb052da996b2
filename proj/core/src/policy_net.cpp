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

#include "pgg/policy_net.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "pgg/error.hpp"
#include "pgg/ppo_loss.hpp"

namespace pgg {

namespace {

using RowMatrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using ConstMatrixMap = Eigen::Map<const RowMatrix>;
using MatrixMap = Eigen::Map<RowMatrix>;
using ConstVectorMap = Eigen::Map<const Eigen::VectorXd>;
using VectorMap = Eigen::Map<Eigen::VectorXd>;

ConstMatrixMap weights(const PolicyParameters& p, const LayerSlice& s) {
  return ConstMatrixMap(p.values().data() + s.weight_offset,
                        static_cast<Eigen::Index>(s.rows),
                        static_cast<Eigen::Index>(s.cols));
}

ConstVectorMap bias(const PolicyParameters& p, const LayerSlice& s) {
  return ConstVectorMap(p.values().data() + s.bias_offset,
                        static_cast<Eigen::Index>(s.rows));
}

struct Activations {
  std::vector<RowMatrix> hidden;  // post-tanh output of each trunk layer
  RowMatrix log_probs;            // [batch x actions]
  RowMatrix probs;
  Eigen::VectorXd values;
};

Activations forward_batch(const PolicyParameters& params, const double* obs,
                          std::size_t batch) {
  const NetShape& shape = params.shape();
  const auto rows = static_cast<Eigen::Index>(batch);
  ConstMatrixMap input(obs, rows, static_cast<Eigen::Index>(shape.input_dim));

  Activations act;
  act.hidden.reserve(shape.hidden.size());
  for (std::size_t l = 0; l < shape.hidden.size(); ++l) {
    const LayerSlice& slice = params.layers()[l];
    RowMatrix z = (l == 0 ? RowMatrix(input) : act.hidden.back()) *
                  weights(params, slice).transpose();
    z.rowwise() += bias(params, slice).transpose();
    act.hidden.emplace_back(z.array().tanh().matrix());
  }
  const RowMatrix& trunk = act.hidden.back();

  RowMatrix logits = trunk * weights(params, params.policy_head()).transpose();
  logits.rowwise() += bias(params, params.policy_head()).transpose();

  const LayerSlice& vh = params.value_head();
  act.values = trunk * weights(params, vh).transpose();
  act.values.array() += params.values()[vh.bias_offset];

  const Eigen::VectorXd row_max = logits.rowwise().maxCoeff();
  logits.colwise() -= row_max;
  const Eigen::VectorXd log_norm =
      logits.array().exp().rowwise().sum().log().matrix();
  logits.colwise() -= log_norm;
  act.probs = logits.array().exp().matrix();
  act.log_probs = std::move(logits);

  if (!act.log_probs.allFinite() || !act.values.allFinite()) {
    throw NumericalError("policy network produced a non-finite output");
  }
  return act;
}

double row_entropy(const Activations& act, Eigen::Index i) {
  return -(act.probs.row(i).array() * act.log_probs.row(i).array()).sum();
}

void check_batch(const PolicyParameters& params, const Minibatch& batch) {
  const std::size_t n = batch.size();
  require(n > 0, "empty minibatch");
  require(batch.observations.size() == n * params.shape().input_dim &&
              batch.old_log_probs.size() == n && batch.advantages.size() == n &&
              batch.returns.size() == n,
          "minibatch arrays have inconsistent lengths");
  for (std::size_t a : batch.actions) {
    require(a < params.shape().n_actions, "action index out of range");
  }
}

}  // namespace

double ActionGrid::value(std::size_t index, std::size_t size) {
  require(size >= 2 && index < size, "action index out of range");
  return static_cast<double>(index) / static_cast<double>(size - 1);
}

std::size_t ActionGrid::index_of(double contribution, std::size_t size) {
  require(contribution >= 0.0 && contribution <= 1.0,
          "contribution outside [0, 1]");
  return static_cast<std::size_t>(
      std::lround(contribution * static_cast<double>(size - 1)));
}

Observation encode_observation(const RoundResult* last_round,
                               std::size_t round_index,
                               const GameConfig& config) {
  require(round_index >= 1 && round_index <= config.t_max,
          "round index outside [1, t_max]");
  Observation obs;
  obs.features.assign(config.n_players + 1, 0.0);
  if (last_round != nullptr) {
    require(last_round->contributions.size() == config.n_players,
            "previous round has the wrong number of contributions");
    std::copy(last_round->contributions.begin(),
              last_round->contributions.end(), obs.features.begin());
  }
  obs.features.back() =
      static_cast<double>(round_index) / static_cast<double>(config.t_max);
  return obs;
}

PolicyParameters::PolicyParameters(NetShape shape) : shape_(std::move(shape)) {
  require(shape_.input_dim > 0 && shape_.n_actions >= 2 &&
              !shape_.hidden.empty(),
          "invalid network shape");
  std::size_t offset = 0;
  std::size_t fan_in = shape_.input_dim;
  auto add = [&](std::size_t rows) {
    require(rows > 0, "layer width must be positive");
    LayerSlice s{rows, fan_in, offset, offset + rows * fan_in};
    offset = s.bias_offset + rows;
    layers_.push_back(s);
  };
  for (std::size_t width : shape_.hidden) {
    add(width);
    fan_in = width;
  }
  add(shape_.n_actions);
  fan_in = shape_.hidden.back();
  add(1);
  values_.assign(offset, 0.0);
}

PolicyParameters PolicyParameters::initialize(NetShape shape, Rng& rng) {
  PolicyParameters params(std::move(shape));
  const std::size_t policy_index = params.layers_.size() - 2;
  for (std::size_t l = 0; l < params.layers_.size(); ++l) {
    if (l == policy_index) continue;
    const LayerSlice& s = params.layers_[l];
    const double bound = 1.0 / std::sqrt(static_cast<double>(s.cols));
    for (std::size_t i = 0; i < s.rows * s.cols + s.rows; ++i) {
      params.values_[s.weight_offset + i] = bound * (2.0 * rng.uniform() - 1.0);
    }
  }
  return params;
}

PolicyOutput forward(const PolicyParameters& params, const Observation& obs) {
  require(obs.features.size() == params.shape().input_dim,
          "observation size does not match the network input");
  const Activations act = forward_batch(params, obs.features.data(), 1);
  PolicyOutput out;
  out.probs.assign(act.probs.data(), act.probs.data() + act.probs.cols());
  out.log_probs.assign(act.log_probs.data(),
                       act.log_probs.data() + act.log_probs.cols());
  out.value = act.values(0);
  out.entropy = row_entropy(act, 0);
  return out;
}

ActionSample sample_policy_action(std::span<const double> probs, Rng& rng) {
  require(!probs.empty(), "empty distribution");
  double total = 0.0;
  for (double p : probs) {
    require(std::isfinite(p) && p >= 0.0, "invalid probability");
    total += p;
  }
  require(std::abs(total - 1.0) < 1e-6, "distribution is not normalized");
  const double u = rng.uniform() * total;
  double cumulative = 0.0;
  std::size_t chosen = probs.size() - 1;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    cumulative += probs[i];
    if (u < cumulative) {
      chosen = i;
      break;
    }
  }
  // Guard against landing on a zero-mass tail through rounding.
  while (probs[chosen] == 0.0 && chosen > 0) --chosen;
  return {chosen, std::log(probs[chosen])};
}

ActionSample greedy_policy_action(std::span<const double> probs) {
  require(!probs.empty(), "empty distribution");
  const auto it = std::max_element(probs.begin(), probs.end());
  return {static_cast<std::size_t>(it - probs.begin()), std::log(*it)};
}

void Minibatch::clear() {
  observations.clear();
  actions.clear();
  old_log_probs.clear();
  advantages.clear();
  returns.clear();
}

LossComponents evaluate_loss(const PolicyParameters& params,
                             const Minibatch& batch,
                             const LossCoefficients& coeffs) {
  check_batch(params, batch);
  const std::size_t n = batch.size();
  const Activations act =
      forward_batch(params, batch.observations.data(), n);
  LossComponents loss;
  for (std::size_t i = 0; i < n; ++i) {
    const auto row = static_cast<Eigen::Index>(i);
    const double lp =
        act.log_probs(row, static_cast<Eigen::Index>(batch.actions[i]));
    loss.policy_loss -= ppo_surrogate(lp, batch.old_log_probs[i],
                                      batch.advantages[i], coeffs.clip_epsilon);
    const double err = act.values(row) - batch.returns[i];
    loss.value_loss += err * err;
    loss.entropy += row_entropy(act, row);
  }
  const double inv = 1.0 / static_cast<double>(n);
  loss.policy_loss *= inv;
  loss.value_loss *= inv;
  loss.entropy *= inv;
  loss.total = loss.policy_loss + coeffs.value_coeff * loss.value_loss -
               coeffs.entropy_coeff * loss.entropy;
  return loss;
}

GradientResult backward(const PolicyParameters& params, const Minibatch& batch,
                        const LossCoefficients& coeffs) {
  check_batch(params, batch);
  const std::size_t n = batch.size();
  const NetShape& shape = params.shape();
  const Activations act =
      forward_batch(params, batch.observations.data(), n);
  const double inv = 1.0 / static_cast<double>(n);

  GradientResult out;
  out.gradient.assign(params.size(), 0.0);
  LossComponents& loss = out.loss;

  RowMatrix d_logits(static_cast<Eigen::Index>(n),
                     static_cast<Eigen::Index>(shape.n_actions));
  Eigen::VectorXd d_values(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    const auto row = static_cast<Eigen::Index>(i);
    const auto a = static_cast<Eigen::Index>(batch.actions[i]);
    const double lp = act.log_probs(row, a);
    const double adv = batch.advantages[i];
    const double old = batch.old_log_probs[i];
    loss.policy_loss -= ppo_surrogate(lp, old, adv, coeffs.clip_epsilon);
    const double entropy = row_entropy(act, row);
    loss.entropy += entropy;
    const double err = act.values(row) - batch.returns[i];
    loss.value_loss += err * err;

    // d(-surrogate)/d(log p_a) pushed through log-softmax.
    const double g = -ppo_surrogate_grad(lp, old, adv, coeffs.clip_epsilon);
    // d(-c * H)/dz_j = c * p_j * (log p_j + H)
    d_logits.row(row) =
        (coeffs.entropy_coeff *
             (act.probs.row(row).array() *
              (act.log_probs.row(row).array() + entropy)) -
         g * act.probs.row(row).array())
            .matrix() *
        inv;
    d_logits(row, a) += g * inv;
    d_values(row) = 2.0 * coeffs.value_coeff * err * inv;
  }
  loss.policy_loss *= inv;
  loss.value_loss *= inv;
  loss.entropy *= inv;
  loss.total = loss.policy_loss + coeffs.value_coeff * loss.value_loss -
               coeffs.entropy_coeff * loss.entropy;
  if (!std::isfinite(loss.total)) {
    throw NumericalError("non-finite loss");
  }

  auto grad_w = [&](const LayerSlice& s) {
    return MatrixMap(out.gradient.data() + s.weight_offset,
                     static_cast<Eigen::Index>(s.rows),
                     static_cast<Eigen::Index>(s.cols));
  };
  auto grad_b = [&](const LayerSlice& s) {
    return VectorMap(out.gradient.data() + s.bias_offset,
                     static_cast<Eigen::Index>(s.rows));
  };

  const RowMatrix& trunk = act.hidden.back();
  const LayerSlice& ph = params.policy_head();
  const LayerSlice& vh = params.value_head();
  grad_w(ph) = d_logits.transpose() * trunk;
  grad_b(ph) = d_logits.colwise().sum().transpose();
  grad_w(vh) = d_values.transpose() * trunk;
  grad_b(vh)(0) = d_values.sum();

  RowMatrix d_hidden = d_logits * weights(params, ph);
  d_hidden += d_values * weights(params, vh);

  const auto rows = static_cast<Eigen::Index>(n);
  for (std::size_t l = shape.hidden.size(); l-- > 0;) {
    const LayerSlice& s = params.layers()[l];
    const RowMatrix d_pre =
        (d_hidden.array() * (1.0 - act.hidden[l].array().square())).matrix();
    if (l == 0) {
      grad_w(s) = d_pre.transpose() *
                  ConstMatrixMap(batch.observations.data(), rows,
                                 static_cast<Eigen::Index>(shape.input_dim));
    } else {
      grad_w(s) = d_pre.transpose() * act.hidden[l - 1];
      d_hidden = d_pre * weights(params, s);
    }
    grad_b(s) = d_pre.colwise().sum().transpose();
  }

  for (double g : out.gradient) {
    if (!std::isfinite(g)) throw NumericalError("non-finite gradient");
  }
  return out;
}

std::string model_to_json(const ModelFile& model) {
  using nlohmann::ordered_json;
  const PolicyParameters& p = model.params;
  ordered_json doc;
  doc["format"] = "pgg-policy";
  doc["version"] = PolicyParameters::kFormatVersion;
  doc["reward_kind"] = model.reward_kind;
  doc["action_step"] = model.action_step;
  doc["shape"] = {{"input_dim", p.shape().input_dim},
                  {"hidden", p.shape().hidden},
                  {"n_actions", p.shape().n_actions}};
  ordered_json layers = ordered_json::array();
  const std::size_t n_hidden = p.shape().hidden.size();
  for (std::size_t l = 0; l < p.layers().size(); ++l) {
    const LayerSlice& s = p.layers()[l];
    std::string name = l < n_hidden ? "hidden_" + std::to_string(l)
                       : l == n_hidden ? "policy_head"
                                       : "value_head";
    const auto vals = p.values();
    layers.push_back(
        {{"name", name},
         {"rows", s.rows},
         {"cols", s.cols},
         {"weights", std::vector<double>(
                         vals.begin() + static_cast<long>(s.weight_offset),
                         vals.begin() + static_cast<long>(s.bias_offset))},
         {"bias", std::vector<double>(
                      vals.begin() + static_cast<long>(s.bias_offset),
                      vals.begin() + static_cast<long>(s.bias_offset + s.rows))}});
  }
  doc["layers"] = std::move(layers);
  ordered_json config = ordered_json::object();
  for (const auto& [key, value] : model.config) config[key] = value;
  doc["config"] = std::move(config);
  return doc.dump(1) + "\n";
}

ModelFile model_from_json(const std::string& text) {
  using nlohmann::ordered_json;
  ordered_json doc;
  try {
    doc = ordered_json::parse(text);
  } catch (const ordered_json::exception& e) {
    throw DataError(std::string("model file is not valid JSON: ") + e.what());
  }
  try {
    if (doc.at("format").get<std::string>() != "pgg-policy") {
      throw DataError("model file has an unknown format tag");
    }
    if (doc.at("version").get<int>() != PolicyParameters::kFormatVersion) {
      throw DataError("unsupported model file version");
    }
    NetShape shape;
    shape.input_dim = doc.at("shape").at("input_dim").get<std::size_t>();
    shape.hidden =
        doc.at("shape").at("hidden").get<std::vector<std::size_t>>();
    shape.n_actions = doc.at("shape").at("n_actions").get<std::size_t>();

    ModelFile model;
    model.params = PolicyParameters(shape);
    model.reward_kind = doc.at("reward_kind").get<std::string>();
    model.action_step = doc.at("action_step").get<double>();

    const auto& layers = doc.at("layers");
    if (layers.size() != model.params.layers().size()) {
      throw DataError("model file layer count does not match its shape");
    }
    auto vals = model.params.values();
    for (std::size_t l = 0; l < layers.size(); ++l) {
      const LayerSlice& s = model.params.layers()[l];
      const auto w = layers[l].at("weights").get<std::vector<double>>();
      const auto b = layers[l].at("bias").get<std::vector<double>>();
      if (layers[l].at("rows").get<std::size_t>() != s.rows ||
          layers[l].at("cols").get<std::size_t>() != s.cols ||
          w.size() != s.rows * s.cols || b.size() != s.rows) {
        throw DataError("model file layer " + std::to_string(l) +
                        " does not match its shape metadata");
      }
      std::copy(w.begin(), w.end(), vals.begin() + static_cast<long>(s.weight_offset));
      std::copy(b.begin(), b.end(), vals.begin() + static_cast<long>(s.bias_offset));
    }
    for (double v : vals) {
      if (!std::isfinite(v)) throw DataError("model file contains non-finite weights");
    }
    if (doc.contains("config")) {
      for (const auto& [key, value] : doc["config"].items()) {
        model.config.emplace_back(key, value.get<std::string>());
      }
    }
    return model;
  } catch (const ordered_json::exception& e) {
    throw DataError(std::string("malformed model file: ") + e.what());
  } catch (const ContractViolation& e) {
    throw DataError(std::string("malformed model file: ") + e.what());
  }
}

void save_model(const ModelFile& model, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot open '" + path.string() + "' for writing");
  out << model_to_json(model);
  if (!out) throw DataError("failed writing '" + path.string() + "'");
}

ModelFile load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open model file '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return model_from_json(buffer.str());
}

}  // namespace pgg
