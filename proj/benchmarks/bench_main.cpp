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

#include <benchmark/benchmark.h>

#include <vector>

#include "pgg/campaign.hpp"
#include "pgg/cc_agent.hpp"
#include "pgg/policy_net.hpp"
#include "pgg/ppo.hpp"
#include "pgg/stats.hpp"

namespace {

using namespace pgg;

PolicyParameters random_net(Rng& rng) {
  PolicyParameters p(NetShape{});
  for (double& v : p.values()) v = 0.2 * (2.0 * rng.uniform() - 1.0);
  return p;
}

Minibatch random_minibatch(const PolicyParameters& params, std::size_t n, Rng& rng) {
  Minibatch mb;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < params.shape().input_dim; ++j) {
      mb.observations.push_back(rng.uniform());
    }
    mb.actions.push_back(rng.uniform_index(params.shape().n_actions));
    mb.old_log_probs.push_back(-4.6);
    mb.advantages.push_back(2.0 * rng.uniform() - 1.0);
    mb.returns.push_back(3.0 * rng.uniform());
  }
  return mb;
}

void BM_Forward(benchmark::State& state) {
  Rng rng(1);
  const auto params = random_net(rng);
  const auto obs = encode_observation(nullptr, 1, GameConfig{});
  for (auto _ : state) benchmark::DoNotOptimize(forward(params, obs));
}
BENCHMARK(BM_Forward);

void BM_Backward(benchmark::State& state) {
  Rng rng(2);
  const auto params = random_net(rng);
  const auto mb = random_minibatch(params, static_cast<std::size_t>(state.range(0)), rng);
  for (auto _ : state) benchmark::DoNotOptimize(backward(params, mb, LossCoefficients{}));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Backward)->Arg(32)->Arg(128);

void BM_BaselineEpisode(benchmark::State& state) {
  CampaignSpec spec;
  spec.games = 1;
  std::size_t game = 0;
  for (auto _ : state) benchmark::DoNotOptimize(play_campaign_game(spec, game++));
}
BENCHMARK(BM_BaselineEpisode);

void BM_CollectRollouts(benchmark::State& state) {
  Rng rng(3);
  const auto params = PolicyParameters::initialize(NetShape{}, rng);
  TrainConfig cfg;
  cfg.batch_steps = 4000;
  cfg.total_steps = 4000;
  std::uint64_t b = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(collect_rollouts(params, cfg, GameConfig{}, Rng(b++)));
  }
  state.SetItemsProcessed(state.iterations() * 4000);
}
BENCHMARK(BM_CollectRollouts)->Unit(benchmark::kMillisecond);

void BM_MannWhitney(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  Rng rng(4);
  std::vector<double> a(n), b(n);
  for (double& x : a) x = rng.uniform();
  for (double& x : b) x = rng.uniform() + 0.1;
  for (auto _ : state) benchmark::DoNotOptimize(mann_whitney_u(a, b));
}
BENCHMARK(BM_MannWhitney)->Arg(8)->Arg(2000)->Arg(10000);

}  // namespace

BENCHMARK_MAIN();
