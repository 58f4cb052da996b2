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

#include "pgg/campaign.hpp"

#include <memory>

#include "pgg/cc_agent.hpp"
#include "pgg/error.hpp"
#include "pgg/parallel.hpp"

namespace pgg {

std::string_view to_string(Group group) {
  switch (group) {
    case Group::kBaseline:
      return "baseline";
    case Group::kSumDrl:
      return "sum-drl";
    case Group::kPropDrl:
      return "prop-drl";
  }
  return "?";
}

Group parse_group(std::string_view text) {
  if (text == "baseline") return Group::kBaseline;
  if (text == "sum-drl") return Group::kSumDrl;
  if (text == "prop-drl") return Group::kPropDrl;
  throw ContractViolation("unknown group '" + std::string(text) + "'");
}

Group group_for(RewardKind kind) {
  return kind == RewardKind::kSum ? Group::kSumDrl : Group::kPropDrl;
}

void CampaignSpec::validate() const {
  game.validate();
  require(games >= 1, "a campaign needs at least one game");
  require(workers >= 1, "workers must be >= 1");
  if (group != Group::kBaseline) {
    require(model.has_value(), "DRL campaigns require a model");
    require(model->shape().input_dim == observation_size(game),
            "model input size does not match the game");
  }
}

EpisodeRecord play_campaign_game(const CampaignSpec& spec, std::size_t game) {
  Rng rng = Rng(spec.seed).split(game);
  const CcParams cc = CcParams::from(spec.game);
  std::vector<std::unique_ptr<Agent>> roster;
  const bool drl = spec.group != Group::kBaseline;
  const std::size_t cc_seats = spec.game.n_players - (drl ? 1 : 0);
  for (std::size_t seat = 0; seat < cc_seats; ++seat) {
    roster.push_back(std::make_unique<CcAgent>(cc));
  }
  if (drl) {
    const RewardKind kind =
        spec.group == Group::kSumDrl ? RewardKind::kSum : RewardKind::kProp;
    roster.push_back(
        std::make_unique<PlannerAgent>(*spec.model, kind, spec.policy_mode));
  }
  return run_episode(roster, spec.game, rng);
}

CampaignResult run_campaign(const CampaignSpec& spec) {
  spec.validate();
  CampaignResult result;
  result.records.resize(spec.games);
  parallel_for(spec.games, spec.workers, [&](std::size_t g) {
    result.records[g] = play_campaign_game(spec, g);
  });
  result.summary = summarize(result.records, spec.game.coop_threshold);
  return result;
}

}  // namespace pgg
