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

#include "pgg/ppo_loss.hpp"

#include <algorithm>
#include <cmath>

namespace pgg {

double ppo_surrogate(double new_log_prob, double old_log_prob,
                     double advantage, double clip_epsilon) {
  const double ratio = std::exp(new_log_prob - old_log_prob);
  const double clipped =
      std::clamp(ratio, 1.0 - clip_epsilon, 1.0 + clip_epsilon);
  return std::min(ratio * advantage, clipped * advantage);
}

double ppo_surrogate_grad(double new_log_prob, double old_log_prob,
                          double advantage, double clip_epsilon) {
  const double ratio = std::exp(new_log_prob - old_log_prob);
  const double clipped =
      std::clamp(ratio, 1.0 - clip_epsilon, 1.0 + clip_epsilon);
  const bool unclipped_active = ratio * advantage <= clipped * advantage;
  return unclipped_active ? advantage * ratio : 0.0;
}

}  // namespace pgg
