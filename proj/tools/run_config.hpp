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
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "pgg/game.hpp"
#include "pgg/ppo.hpp"

namespace pgg::cli {

// Every tunable value a command can read, with built-in defaults.
struct RunConfig {
  GameConfig game;
  TrainConfig train;
  bool reward_set = false;
  std::size_t games = 10'000;
  PolicyMode policy_mode = PolicyMode::kSample;
  std::size_t validation_bins = 10;
  std::size_t heatmap_bins = 20;
  std::size_t transition_bins = 10;
};

using KeyValues = std::vector<std::pair<std::string, std::string>>;

struct ConfigKey {
  std::string name;
  std::string help;
  std::function<void(RunConfig&, std::string_view)> set;
  std::function<std::string(const RunConfig&)> get;
};

const std::vector<ConfigKey>& config_keys();

// Throws ContractViolation for unknown keys or unparsable values.
void apply_setting(RunConfig& config, std::string_view key,
                   std::string_view value);

// `key = value` lines; '#' starts a comment. Throws DataError with the line
// number on malformed lines.
KeyValues parse_config_text(const std::string& text);
void apply_config_file(RunConfig& config, const std::filesystem::path& path);

// PGG_<KEY> variables, e.g. PGG_LEARNING_RATE.
std::string env_name(std::string_view key);
void apply_environment(
    RunConfig& config,
    const std::function<std::optional<std::string>(const std::string&)>& lookup);

enum class Preset { kDesk, kPaper };
Preset parse_preset(std::string_view text);
void apply_preset(RunConfig& config, Preset preset);

// Resolved values in registry order.
KeyValues resolved(const RunConfig& config);
std::string to_config_text(const KeyValues& values);

}  // namespace pgg::cli
