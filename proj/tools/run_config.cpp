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

#include "run_config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

#include "pgg/error.hpp"

namespace pgg::cli {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

double to_double(std::string_view key, std::string_view text) {
  double v = 0.0;
  const auto* end = text.data() + text.size();
  const auto res = std::from_chars(text.data(), end, v);
  require(!text.empty() && res.ec == std::errc() && res.ptr == end,
          "invalid number '" + std::string(text) + "' for " + std::string(key));
  return v;
}

std::uint64_t to_uint(std::string_view key, std::string_view text) {
  std::uint64_t v = 0;
  const auto* end = text.data() + text.size();
  const auto res = std::from_chars(text.data(), end, v);
  require(!text.empty() && res.ec == std::errc() && res.ptr == end,
          "invalid non-negative integer '" + std::string(text) + "' for " +
              std::string(key));
  return v;
}

bool to_bool(std::string_view key, std::string_view text) {
  if (text == "true" || text == "1") return true;
  if (text == "false" || text == "0") return false;
  throw ContractViolation("invalid boolean '" + std::string(text) + "' for " +
                          std::string(key));
}

std::string show(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string show(std::uint64_t v) { return std::to_string(v); }

std::vector<std::size_t> to_widths(std::string_view key, std::string_view text) {
  std::vector<std::size_t> widths;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    const auto piece =
        text.substr(start, comma == std::string_view::npos ? text.npos : comma - start);
    widths.push_back(to_uint(key, trim(piece)));
    require(widths.back() > 0, "hidden layer widths must be positive");
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return widths;
}

std::string show_widths(const std::vector<std::size_t>& widths) {
  std::string out;
  for (std::size_t i = 0; i < widths.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(widths[i]);
  }
  return out;
}

#define PGG_DOUBLE(key, field, help)                                          \
  ConfigKey {                                                                 \
    key, help,                                                                \
        [](RunConfig& c, std::string_view v) { c.field = to_double(key, v); }, \
        [](const RunConfig& c) { return show(c.field); }                      \
  }
#define PGG_UINT(key, field, help)                                          \
  ConfigKey {                                                               \
    key, help,                                                              \
        [](RunConfig& c, std::string_view v) { c.field = to_uint(key, v); }, \
        [](const RunConfig& c) { return show(std::uint64_t{c.field}); }     \
  }

std::vector<ConfigKey> build_keys() {
  std::vector<ConfigKey> keys = {
      PGG_UINT("n_players", game.n_players, "players per game (N)"),
      PGG_UINT("t_max", game.t_max, "rounds per game"),
      PGG_DOUBLE("k", game.k, "public pool multiplication factor"),
      PGG_DOUBLE("aspiration", game.aspiration, "CC aspiration level A"),
      PGG_DOUBLE("threshold_x", game.threshold_x, "CC cooperation threshold X"),
      PGG_DOUBLE("beta", game.beta, "CC stimulus sensitivity"),
      PGG_DOUBLE("sigma", game.sigma, "CC action noise standard deviation"),
      PGG_DOUBLE("coop_threshold", game.coop_threshold,
                 "contribution counted as cooperative when strictly above"),
      ConfigKey{"bm_form", "bounded | as_printed_with_clamp",
                [](RunConfig& c, std::string_view v) {
                  c.game.bm_form = parse_bm_form(v);
                },
                [](const RunConfig& c) {
                  return std::string(to_string(c.game.bm_form));
                }},
      ConfigKey{"reward", "planner reward: sum | prop",
                [](RunConfig& c, std::string_view v) {
                  c.train.reward = parse_reward_kind(v);
                  c.reward_set = true;
                },
                [](const RunConfig& c) {
                  return std::string(to_string(c.train.reward));
                }},
      PGG_UINT("total_steps", train.total_steps, "training steps"),
      PGG_UINT("batch_steps", train.batch_steps, "steps per PPO batch"),
      PGG_UINT("sgd_minibatch_size", train.minibatch_size, "SGD minibatch size"),
      PGG_UINT("num_sgd_iterations", train.epochs_per_batch,
               "optimization epochs per batch"),
      PGG_DOUBLE("clipping_parameter", train.clip_epsilon, "PPO clip epsilon"),
      PGG_DOUBLE("discount_factor", train.gamma, "return discount"),
      PGG_DOUBLE("learning_rate", train.learning_rate, "optimizer step size"),
      PGG_DOUBLE("value_coeff", train.value_coeff, "value loss weight"),
      PGG_DOUBLE("entropy_coeff", train.entropy_coeff, "entropy bonus weight"),
      ConfigKey{"normalize_advantages", "true | false",
                [](RunConfig& c, std::string_view v) {
                  c.train.normalize_advantages = to_bool("normalize_advantages", v);
                },
                [](const RunConfig& c) {
                  return std::string(c.train.normalize_advantages ? "true" : "false");
                }},
      ConfigKey{"optimizer", "adam | sgd",
                [](RunConfig& c, std::string_view v) {
                  c.train.optimizer = parse_optimizer_kind(v);
                },
                [](const RunConfig& c) {
                  return std::string(to_string(c.train.optimizer));
                }},
      ConfigKey{"lr_schedule", "constant | linear",
                [](RunConfig& c, std::string_view v) {
                  c.train.lr_schedule = parse_lr_schedule(v);
                },
                [](const RunConfig& c) {
                  return std::string(to_string(c.train.lr_schedule));
                }},
      PGG_DOUBLE("max_grad_norm", train.max_grad_norm,
                 "gradient norm clip, 0 disables"),
      ConfigKey{"hidden", "comma-separated hidden layer widths",
                [](RunConfig& c, std::string_view v) {
                  c.train.hidden = to_widths("hidden", v);
                },
                [](const RunConfig& c) { return show_widths(c.train.hidden); }},
      PGG_UINT("seed", train.seed, "master random seed"),
      PGG_UINT("games", games, "evaluation games per campaign"),
      ConfigKey{"policy_mode", "planner evaluation policy: sample | greedy",
                [](RunConfig& c, std::string_view v) {
                  if (v == "sample") {
                    c.policy_mode = PolicyMode::kSample;
                  } else if (v == "greedy") {
                    c.policy_mode = PolicyMode::kGreedy;
                  } else {
                    throw ContractViolation("unknown policy_mode '" +
                                            std::string(v) + "'");
                  }
                },
                [](const RunConfig& c) {
                  return std::string(c.policy_mode == PolicyMode::kSample ? "sample"
                                                                          : "greedy");
                }},
      PGG_UINT("validation_bins", validation_bins, "bins for response curves"),
      PGG_UINT("heatmap_bins", heatmap_bins, "bins for per-round heatmaps"),
      PGG_UINT("transition_bins", transition_bins, "bins for transition matrices"),
  };
  return keys;
}

#undef PGG_DOUBLE
#undef PGG_UINT

}  // namespace

const std::vector<ConfigKey>& config_keys() {
  static const std::vector<ConfigKey> keys = build_keys();
  return keys;
}

void apply_setting(RunConfig& config, std::string_view key,
                   std::string_view value) {
  for (const ConfigKey& k : config_keys()) {
    if (k.name == key) {
      k.set(config, trim(value));
      return;
    }
  }
  throw ContractViolation("unknown config key '" + std::string(key) + "'");
}

KeyValues parse_config_text(const std::string& text) {
  KeyValues values;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) {
      line.erase(hash);
    }
    const std::string body = trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) {
      throw DataError("line " + std::to_string(line_no) +
                      ": expected 'key = value'");
    }
    std::string key = trim(std::string_view(body).substr(0, eq));
    std::string value = trim(std::string_view(body).substr(eq + 1));
    if (key.empty()) {
      throw DataError("line " + std::to_string(line_no) + ": empty key");
    }
    values.emplace_back(std::move(key), std::move(value));
  }
  return values;
}

void apply_config_file(RunConfig& config, const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open config file '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  KeyValues values;
  try {
    values = parse_config_text(buffer.str());
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
  for (const auto& [key, value] : values) apply_setting(config, key, value);
}

std::string env_name(std::string_view key) {
  std::string name = "PGG_";
  for (char c : key) {
    name += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  }
  return name;
}

void apply_environment(
    RunConfig& config,
    const std::function<std::optional<std::string>(const std::string&)>& lookup) {
  for (const ConfigKey& k : config_keys()) {
    if (const auto value = lookup(env_name(k.name))) k.set(config, trim(*value));
  }
}

Preset parse_preset(std::string_view text) {
  if (text == "desk") return Preset::kDesk;
  if (text == "paper") return Preset::kPaper;
  throw ContractViolation("unknown preset '" + std::string(text) + "'");
}

void apply_preset(RunConfig& config, Preset preset) {
  config.train.total_steps = preset == Preset::kDesk ? 800'000 : 4'000'000;
}

KeyValues resolved(const RunConfig& config) {
  KeyValues values;
  for (const ConfigKey& k : config_keys()) {
    values.emplace_back(k.name, k.get(config));
  }
  return values;
}

std::string to_config_text(const KeyValues& values) {
  std::string out;
  for (const auto& [key, value] : values) out += key + " = " + value + "\n";
  return out;
}

}  // namespace pgg::cli
