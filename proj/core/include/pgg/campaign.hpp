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
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "pgg/game.hpp"
#include "pgg/policy_net.hpp"
#include "pgg/ppo.hpp"
#include "pgg/stats.hpp"

namespace pgg {

enum class Group { kBaseline, kSumDrl, kPropDrl };

std::string_view to_string(Group group);
Group parse_group(std::string_view text);
Group group_for(RewardKind kind);

struct CampaignSpec {
  Group group = Group::kBaseline;
  std::size_t games = 10'000;
  std::uint64_t seed = 0;
  GameConfig game;
  // Required for the DRL groups.
  std::optional<PolicyParameters> model;
  PolicyMode policy_mode = PolicyMode::kSample;
  std::size_t workers = 1;

  void validate() const;
};

struct CampaignResult {
  std::vector<EpisodeRecord> records;  // indexed by game
  EvalSummary summary;
};

// Plays one game of the campaign; game i always draws from
// Rng(seed).split(i), so results do not depend on scheduling.
EpisodeRecord play_campaign_game(const CampaignSpec& spec, std::size_t game);

CampaignResult run_campaign(const CampaignSpec& spec);

}  // namespace pgg
