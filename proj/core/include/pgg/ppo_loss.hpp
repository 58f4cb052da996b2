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

namespace pgg {

// Per-sample clipped surrogate: min(r * A, clip(r, 1 - eps, 1 + eps) * A)
// with r = exp(new_log_prob - old_log_prob).
double ppo_surrogate(double new_log_prob, double old_log_prob,
                     double advantage, double clip_epsilon);

// d(surrogate)/d(new_log_prob). Zero wherever the clipped branch is the
// active minimum and the ratio lies outside [1 - eps, 1 + eps].
double ppo_surrogate_grad(double new_log_prob, double old_log_prob,
                          double advantage, double clip_epsilon);

}  // namespace pgg
