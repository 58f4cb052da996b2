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

#include <doctest.h>

#include <cmath>
#include <numbers>

#include "pgg/error.hpp"

using namespace pgg;

namespace {

// E[clamp(X, 0, 1)] for X ~ Normal(mu, sigma) by composite Simpson
// integration of the density over [0, 1] plus the upper tail mass.
double clamped_normal_mean(double mu, double sigma) {
  auto pdf = [&](double x) {
    const double z = (x - mu) / sigma;
    return std::exp(-0.5 * z * z) / (sigma * std::sqrt(2.0 * std::numbers::pi));
  };
  const int n = 20000;
  const double h = 1.0 / n;
  double s = pdf(0.0) * 0.0 + pdf(1.0) * 1.0;
  for (int i = 1; i < n; ++i) {
    const double x = i * h;
    s += (i % 2 ? 4.0 : 2.0) * x * pdf(x);
  }
  const double inside = s * h / 3.0;
  const double upper_tail = 0.5 * std::erfc((1.0 - mu) / (sigma * std::sqrt(2.0)));
  return inside + upper_tail;
}

}  // namespace

TEST_CASE("stimulus worked values") {
  const CcParams p;
  CHECK(stimulus(1.0, p) == 0.0);
  CHECK(stimulus(2.0, p) == doctest::Approx(0.379949).epsilon(1e-6));
  CHECK(stimulus(0.0, p) == doctest::Approx(-0.379949).epsilon(1e-6));
  CHECK(stimulus(2.0, p) == -stimulus(0.0, p));
}

TEST_CASE("stimulus is increasing and bounded over the payoff range") {
  const CcParams p;
  double last = -2.0;
  for (double r = 0.0; r <= 2.2; r += 0.01) {
    const double s = stimulus(r, p);
    CHECK(s > last);
    CHECK(std::abs(s) <= std::tanh(0.48) + 1e-15);
    last = s;
  }
}

TEST_CASE("bm_update worked values (bounded form)") {
  const CcParams p;
  CHECK(std::abs(bm_update(0.5, 0.6, 0.38, p) - 0.69) < 1e-12);
  CHECK(std::abs(bm_update(0.5, 0.6, -0.38, p) - 0.31) < 1e-12);
  CHECK(std::abs(bm_update(0.5, 0.2, 0.38, p) - 0.31) < 1e-12);
  CHECK(std::abs(bm_update(0.5, 0.2, -0.38, p) - 0.69) < 1e-12);
  for (double prob : {0.0, 0.3, 1.0}) {
    for (double a : {0.1, 0.4, 0.9}) CHECK(bm_update(prob, a, 0.0, p) == prob);
  }
}

TEST_CASE("printed form leaves [0, 1] without the clamp") {
  CcParams printed;
  printed.form = BmForm::kAsPrintedWithClamp;
  CHECK(bm_update_unclamped(0.1, 0.2, 0.9, printed) == doctest::Approx(-0.71));
  CHECK(bm_update(0.1, 0.2, 0.9, printed) == 0.0);
  // Bounded form on the same input stays inside.
  CHECK(bm_update_unclamped(0.1, 0.2, 0.9, CcParams{}) == doctest::Approx(0.01));
}

TEST_CASE("bm_update rejects p outside [0, 1]") {
  CHECK_THROWS_AS(bm_update(1.1, 0.5, 0.1, CcParams{}), ContractViolation);
  CHECK_THROWS_AS(bm_update(-0.1, 0.5, 0.1, CcParams{}), ContractViolation);
}

TEST_CASE("bm_update is monotone in the stimulus and never needs the clamp") {
  const CcParams p;
  Rng rng(23);
  for (int i = 0; i < 100000; ++i) {
    const double prob = rng.uniform();
    const double a = rng.uniform();
    const double s1 = 2.0 * rng.uniform() - 1.0;
    const double s2 = 2.0 * rng.uniform() - 1.0;
    const double lo = std::min(s1, s2), hi = std::max(s1, s2);
    const double u_lo = bm_update_unclamped(prob, a, lo, p);
    const double u_hi = bm_update_unclamped(prob, a, hi, p);
    REQUIRE(u_lo >= 0.0);
    REQUIRE(u_lo <= 1.0);
    if (a >= p.threshold_x) {
      REQUIRE(u_hi >= u_lo);
    } else {
      REQUIRE(u_hi <= u_lo);
    }
  }
}

TEST_CASE("sample_action") {
  CcParams degenerate;
  degenerate.sigma = 0.0;
  Rng rng(1);
  CHECK(sample_action(0.5, degenerate, rng) == 0.5);
  CHECK(rng.counter() == 0);
  CHECK(action_from_normal_draw(0.99, 2.0, CcParams{}) == 1.0);
  CHECK(action_from_normal_draw(0.01, -2.0, CcParams{}) == 0.0);
}

TEST_CASE("sample_action mean matches the clamped normal") {
  const CcParams p;
  for (double mu : {0.5, 0.1, 0.95}) {
    Rng rng(99);
    const int n = 100000;
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
      const double a = sample_action(mu, p, rng);
      REQUIRE(a >= 0.0);
      REQUIRE(a <= 1.0);
      sum += a;
    }
    CHECK(std::abs(sum / n - clamped_normal_mean(mu, 0.2)) < 0.01);
  }
}

TEST_CASE("initial_action") {
  CcState s1, s2;
  Rng a(4), b(4);
  const double x = initial_action(s1, a);
  CHECK(x == initial_action(s2, b));
  CHECK(x >= 0.0);
  CHECK(x < 1.0);
  CHECK(s1.p == x);
  CHECK(s1.last_action == x);
  CHECK(s1.initialized);

  CcState s3;
  Rng c(5);
  CHECK(initial_action(s3, c) != x);

  Rng d(8);
  double sum = 0.0;
  for (int i = 0; i < 100000; ++i) {
    CcState s;
    sum += initial_action(s, d);
  }
  CHECK(std::abs(sum / 100000 - 0.5) < 0.01);
}

TEST_CASE("cc_step") {
  CcParams p;
  p.sigma = 0.0;
  Rng rng(1);
  CcState s{0.5, 0.6, true};
  const CcStepResult r = cc_step(s, 2.0, p, rng);
  CHECK(r.action == doctest::Approx(0.5 + 0.5 * std::tanh(0.4)).epsilon(1e-14));
  CHECK(r.action == doctest::Approx(0.69).epsilon(0.001));
  CHECK(r.state.p == r.action);
  CHECK(r.state.last_action == r.action);

  CHECK(cc_step(CcState{1.0, 1.0, true}, 1.0, p, rng).state.p == 1.0);
  CHECK(cc_step(CcState{0.0, 0.0, true}, 1.0, p, rng).state.p == 0.0);
  CHECK_THROWS_AS(cc_step(CcState{}, 1.0, p, rng), ContractViolation);
}

TEST_CASE("CcAgent starts each episode with a uniform draw") {
  const GameConfig cfg;
  CcAgent agent(CcParams::from(cfg));
  Rng rng(12), copy(12);
  const RoundContext first{1, 0, &cfg, nullptr};
  CHECK(agent.act(first, rng) == copy.uniform());
  CHECK(agent.state().p == agent.state().last_action);
}
