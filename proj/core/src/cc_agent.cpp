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

#include "pgg/cc_agent.hpp"

#include <algorithm>
#include <cmath>

#include "pgg/error.hpp"

namespace pgg {

CcParams CcParams::from(const GameConfig& config) {
  return CcParams{config.aspiration, config.threshold_x, config.beta,
                  config.sigma, config.bm_form};
}

void CcParams::validate() const {
  require(beta >= 0.0, "beta must be >= 0");
  require(sigma >= 0.0, "sigma must be >= 0");
  require(threshold_x >= 0.0 && threshold_x <= 1.0,
          "threshold_x must lie in [0, 1]");
}

double stimulus(double payoff, const CcParams& params) {
  return std::tanh(params.beta * (payoff - params.aspiration));
}

double bm_update_unclamped(double p_prev, double a_prev, double s_prev,
                           const CcParams& params) {
  require(p_prev >= 0.0 && p_prev <= 1.0, "p outside [0, 1]");
  const bool cooperated = a_prev >= params.threshold_x;
  const bool satisfied = s_prev >= 0.0;
  if (cooperated) {
    return satisfied ? p_prev + (1.0 - p_prev) * s_prev
                     : p_prev + p_prev * s_prev;
  }
  if (params.form == BmForm::kBounded) {
    // Satisfied defection pushes p toward 0, dissatisfied toward 1.
    return satisfied ? p_prev - p_prev * s_prev
                     : p_prev - (1.0 - p_prev) * s_prev;
  }
  return satisfied ? p_prev - (1.0 - p_prev) * s_prev
                   : p_prev - p_prev * s_prev;
}

double bm_update(double p_prev, double a_prev, double s_prev,
                 const CcParams& params) {
  return std::clamp(bm_update_unclamped(p_prev, a_prev, s_prev, params), 0.0,
                    1.0);
}

double action_from_normal_draw(double p, double z, const CcParams& params) {
  return std::clamp(p + params.sigma * z, 0.0, 1.0);
}

double sample_action(double p, const CcParams& params, Rng& rng) {
  require(p >= 0.0 && p <= 1.0, "p outside [0, 1]");
  if (params.sigma == 0.0) return p;
  return action_from_normal_draw(p, rng.normal(), params);
}

double initial_action(CcState& state, Rng& rng) {
  const double a = rng.uniform();
  state.p = a;
  state.last_action = a;
  state.initialized = true;
  return a;
}

CcStepResult cc_step(const CcState& state, double own_payoff,
                     const CcParams& params, Rng& rng) {
  require(state.initialized, "cc_step on an uninitialized agent");
  const double s = stimulus(own_payoff, params);
  CcStepResult out;
  out.state.p = bm_update(state.p, state.last_action, s, params);
  out.action = sample_action(out.state.p, params, rng);
  out.state.last_action = out.action;
  out.state.initialized = true;
  return out;
}

double CcAgent::act(const RoundContext& context, Rng& rng) {
  if (context.round_index == 1 || !state_.initialized) {
    state_ = CcState{};
    return initial_action(state_, rng);
  }
  const CcStepResult next = cc_step(state_, last_payoff_, params_, rng);
  state_ = next.state;
  return next.action;
}

void CcAgent::observe(const RoundResult& result, std::size_t seat) {
  last_payoff_ = result.payoffs.at(seat);
}

}  // namespace pgg
