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

#include "pgg/game.hpp"
#include "pgg/rng.hpp"

namespace pgg {

// Aspiration-learning parameters of a conditional cooperator.
struct CcParams {
  double aspiration = 1.0;
  double threshold_x = 0.4;
  double beta = 0.4;
  double sigma = 0.2;
  BmForm form = BmForm::kBounded;

  static CcParams from(const GameConfig& config);
  void validate() const;
};

struct CcState {
  double p = 0.0;            // expected cooperative contribution
  double last_action = 0.0;  // contribution made in the previous round
  bool initialized = false;
};

// tanh(beta * (payoff - aspiration)), in (-1, 1).
double stimulus(double payoff, const CcParams& params);

// The Bush-Mosteller update before any clamping. Under the bounded form the
// result always lies in [0, 1] for |s| < 1; under the printed form it may not.
double bm_update_unclamped(double p_prev, double a_prev, double s_prev,
                           const CcParams& params);

// bm_update_unclamped clamped to [0, 1].
double bm_update(double p_prev, double a_prev, double s_prev,
                 const CcParams& params);

// Maps a standard-normal draw z to clamp(p + sigma * z, 0, 1).
double action_from_normal_draw(double p, double z, const CcParams& params);

// Normal(p, sigma) draw clamped to [0, 1]. sigma == 0 returns p and leaves
// the stream untouched.
double sample_action(double p, const CcParams& params, Rng& rng);

// Uniform first-round contribution; `state` starts with p equal to it.
double initial_action(CcState& state, Rng& rng);

struct CcStepResult {
  CcState state;
  double action = 0.0;
};

CcStepResult cc_step(const CcState& state, double own_payoff,
                     const CcParams& params, Rng& rng);

class CcAgent final : public Agent {
 public:
  explicit CcAgent(const CcParams& params) : params_(params) {}

  AgentRole role() const override { return AgentRole::kCc; }
  double act(const RoundContext& context, Rng& rng) override;
  void observe(const RoundResult& result, std::size_t seat) override;

  const CcState& state() const { return state_; }

 private:
  CcParams params_;
  CcState state_;
  double last_payoff_ = 0.0;
};

}  // namespace pgg
