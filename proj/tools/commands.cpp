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

#include "commands.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <limits>
#include <map>
#include <numeric>
#include <ostream>

#include "pgg/campaign.hpp"
#include "pgg/error.hpp"
#include "pgg/figures.hpp"
#include "pgg/policy_net.hpp"
#include "pgg/ppo.hpp"
#include "pgg/stats.hpp"
#include "pgg/table_io.hpp"
#include "run_config.hpp"

namespace fs = std::filesystem;

namespace pgg::cli {

namespace {

constexpr const char* kToolVersion = "0.1.0";

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Options shared by every command that reads configuration.
struct ConfigOptions {
  std::string config_file;
  std::string preset;
  std::size_t workers = 1;
  std::map<std::string, std::string> values;
  std::vector<std::pair<std::string, CLI::Option*>> flags;
};

std::string dashed(std::string key) {
  std::replace(key.begin(), key.end(), '_', '-');
  return key;
}

void add_config_options(CLI::App& app, ConfigOptions& opts, bool with_preset) {
  app.add_option("--config", opts.config_file,
                 "key = value configuration file");
  if (with_preset) {
    app.add_option("--preset", opts.preset, "desk (800k steps) | paper (4M steps)")
        ->check(CLI::IsMember({"desk", "paper"}));
  }
  app.add_option("--workers", opts.workers,
                 "worker threads; outputs do not depend on it")
      ->check(CLI::PositiveNumber);
  for (const ConfigKey& key : config_keys()) {
    CLI::Option* opt = app.add_option("--" + dashed(key.name),
                                      opts.values[key.name], key.help);
    opts.flags.emplace_back(key.name, opt);
  }
}

// defaults < preset < config file < environment < flags
RunConfig resolve(const ConfigOptions& opts, const EnvLookup& env) {
  RunConfig config;
  if (!opts.preset.empty()) apply_preset(config, parse_preset(opts.preset));
  if (!opts.config_file.empty()) apply_config_file(config, opts.config_file);
  apply_environment(config, env);
  for (const auto& [name, option] : opts.flags) {
    if (option->count() > 0) apply_setting(config, name, opts.values.at(name));
  }
  config.game.validate();
  config.train.workers = opts.workers;
  return config;
}

struct Manifest {
  std::string command;
  std::string argv;
  KeyValues values;
  std::vector<std::string> outputs;
  std::chrono::steady_clock::time_point started = std::chrono::steady_clock::now();

  void write(const fs::path& path) const {
    std::string text = "# pgg run manifest\n";
    text += "tool_version = " + std::string(kToolVersion) + "\n";
    text += "command = " + command + "\n";
    text += "argv = " + argv + "\n";
    text += to_config_text(values);
    for (const auto& o : outputs) text += "output = " + o + "\n";
    const double seconds = std::chrono::duration<double>(
                               std::chrono::steady_clock::now() - started)
                               .count();
    text += "wall_clock_seconds = " + format_number(seconds) + "\n";
    write_text_file(path, text);
  }
};

std::string join_argv(int argc, const char* const* argv) {
  std::string s;
  for (int i = 0; i < argc; ++i) {
    if (i) s += ' ';
    s += argv[i];
  }
  return s;
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    throw DataError("cannot create output directory '" + dir.string() + "'");
  }
}

Table per_game_table(const EvalSummary& s) {
  Table t({"game", "sum_contribution", "prop_over_threshold",
           "cc_sum_contribution", "cc_prop_over_threshold"});
  for (std::size_t g = 0; g < s.per_game.size(); ++g) {
    const GameMetrics& m = s.per_game[g];
    Table::Row row;
    row << g << m.sum_contribution << m.prop_over_threshold
        << m.cc_sum_contribution << m.cc_prop_over_threshold;
    t.add(std::move(row));
  }
  return t;
}

std::vector<double> column_of(const std::vector<GameMetrics>& games,
                              double GameMetrics::*field) {
  std::vector<double> out;
  out.reserve(games.size());
  for (const GameMetrics& g : games) out.push_back(g.*field);
  return out;
}

double mean_of(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

const std::vector<std::string> kSummaryColumns = {
    "group", "games", "seed", "sum_contribution_mean",
    "prop_over_threshold_mean", "cc_sum_contribution_mean",
    "cc_prop_over_threshold_mean", "baseline", "sum_u", "sum_p",
    "sum_pct_change", "prop_u", "prop_p", "prop_pct_change"};

struct BaselineSamples {
  std::string name;
  std::vector<double> sums;
  std::vector<double> props;
};

void add_summary_row(Table& table, Group group, std::uint64_t seed,
                     const EvalSummary& s, const BaselineSamples* base) {
  Table::Row row;
  row << to_string(group) << s.games << std::to_string(seed)
      << s.sum_contribution_mean << s.prop_over_threshold_mean
      << s.cc_sum_contribution_mean << s.cc_prop_over_threshold_mean;
  if (base == nullptr) {
    for (int i = 0; i < 7; ++i) row.empty();
  } else {
    const auto sums = column_of(s.per_game, &GameMetrics::sum_contribution);
    const auto props = column_of(s.per_game, &GameMetrics::prop_over_threshold);
    const MannWhitneyResult su = mann_whitney_u(sums, base->sums);
    const MannWhitneyResult pu = mann_whitney_u(props, base->props);
    const double base_sum = mean_of(base->sums);
    const double base_prop = mean_of(base->props);
    const double nan = std::numeric_limits<double>::quiet_NaN();
    row << base->name << su.u << su.p_value
        << (base_sum != 0.0 ? percentage_change(base_sum, mean_of(sums)) : nan)
        << pu.u << pu.p_value
        << (base_prop != 0.0 ? percentage_change(base_prop, mean_of(props)) : nan);
  }
  table.add(std::move(row));
}

void print_summary(std::ostream& out, Group group, const EvalSummary& s) {
  out << to_string(group) << ": games=" << s.games
      << " sum_contribution_mean=" << format_number(s.sum_contribution_mean)
      << " prop_over_threshold_mean=" << format_number(s.prop_over_threshold_mean)
      << " cc_sum_contribution_mean=" << format_number(s.cc_sum_contribution_mean)
      << " cc_prop_over_threshold_mean="
      << format_number(s.cc_prop_over_threshold_mean) << "\n";
}

Heatmap heatmap_chart(const Matrix& m, const std::string& title, bool diverging,
                      const std::string& x_label, const std::string& y_label) {
  Heatmap map;
  map.title = title;
  map.x_label = x_label;
  map.y_label = y_label;
  map.rows = m.rows;
  map.cols = m.cols;
  map.values = m.data;
  map.diverging = diverging;
  if (diverging) {
    double extent = 0.0;
    for (double v : m.data) extent = std::max(extent, std::abs(v));
    if (extent <= 0.0) extent = 1.0;
    map.value_min = -extent;
    map.value_max = extent;
  } else {
    double hi = 0.0;
    for (double v : m.data) hi = std::max(hi, v);
    map.value_min = 0.0;
    map.value_max = hi > 0.0 ? hi : 1.0;
  }
  return map;
}

double cell_or_nan(const Table& t, std::size_t row, std::size_t col) {
  const std::string& cell = t.rows()[row][col];
  if (cell.empty()) return std::numeric_limits<double>::quiet_NaN();
  return parse_number(cell, row + 2);
}

LineChart line_chart_from(const Table& t, std::size_t x_col,
                          const std::vector<std::size_t>& y_cols,
                          std::vector<double> x_values) {
  LineChart chart;
  if (x_values.empty()) {
    for (std::size_t r = 0; r < t.rows().size(); ++r) {
      x_values.push_back(cell_or_nan(t, r, x_col));
    }
  }
  for (std::size_t c : y_cols) {
    LineSeries s;
    s.name = t.columns()[c];
    s.x = x_values;
    for (std::size_t r = 0; r < t.rows().size(); ++r) {
      s.y.push_back(cell_or_nan(t, r, c));
    }
    chart.series.push_back(std::move(s));
  }
  if (!x_values.empty()) {
    chart.x_min = *std::min_element(x_values.begin(), x_values.end());
    chart.x_max = *std::max_element(x_values.begin(), x_values.end());
  }
  return chart;
}

// Writes the figure-data CSVs shared by baseline, validate and eval.
void write_baseline_figures(const fs::path& dir, const RunConfig& config,
                            const CampaignResult& baseline, Manifest& manifest) {
  const BinnedTable curves =
      validation_curves(baseline.records, config.validation_bins);
  emit_csv(validation_table(curves), dir / "validation.csv");
  emit_csv(matrix_table(contribution_heatmap(baseline.records, config.heatmap_bins),
                        "round", 1),
           dir / "heatmap_baseline.csv");
  manifest.outputs.push_back((dir / "validation.csv").string());
  manifest.outputs.push_back((dir / "heatmap_baseline.csv").string());
}

CampaignSpec baseline_spec(const RunConfig& config, std::uint64_t seed,
                           std::size_t workers) {
  CampaignSpec spec;
  spec.group = Group::kBaseline;
  spec.games = config.games;
  spec.seed = seed;
  spec.game = config.game;
  spec.workers = workers;
  return spec;
}

// ---------------------------------------------------------------------------

int cmd_train(const ConfigOptions& opts, const std::string& out_path,
              std::string log_path, const Manifest& base, const EnvLookup& env,
              std::ostream& out) {
  RunConfig config = resolve(opts, env);
  if (!config.reward_set) {
    throw UsageError("train requires --reward (sum | prop)");
  }
  config.train.validate(config.game);
  const fs::path model_path(out_path);
  const fs::path stem = model_path.parent_path() / model_path.stem();
  if (log_path.empty()) log_path = stem.string() + "_log.csv";
  if (!model_path.parent_path().empty()) ensure_dir(model_path.parent_path());

  Manifest manifest = base;
  manifest.values = resolved(config);
  const std::size_t batches = config.train.batches();
  const std::size_t every = std::max<std::size_t>(1, batches / 20);
  const TrainResult result =
      train(config.train, config.game, [&](const TrainingLogEntry& e) {
        if ((e.batch + 1) % every == 0 || e.batch + 1 == batches) {
          out << "batch " << e.batch + 1 << "/" << batches
              << " mean_episode_reward=" << format_number(e.mean_episode_reward)
              << " entropy=" << format_number(e.entropy) << "\n";
        }
      });

  ModelFile model;
  model.params = result.params;
  model.reward_kind = std::string(to_string(config.train.reward));
  model.config = manifest.values;
  save_model(model, model_path);

  Table log({"batch", "mean_episode_reward", "policy_loss", "value_loss",
             "entropy"});
  for (const TrainingLogEntry& e : result.log) {
    Table::Row row;
    row << e.batch << e.mean_episode_reward << e.policy_loss << e.value_loss
        << e.entropy;
    log.add(std::move(row));
  }
  emit_csv(log, log_path);
  manifest.outputs = {model_path.string(), log_path};
  manifest.write(stem.string() + "_manifest.txt");
  out << "wrote " << model_path.string() << " and " << log_path << "\n";
  return kExitOk;
}

int cmd_baseline(const ConfigOptions& opts, const std::string& out_dir,
                 bool validate_only, const Manifest& base, const EnvLookup& env,
                 std::ostream& out) {
  const RunConfig config = resolve(opts, env);
  const fs::path dir(out_dir);
  ensure_dir(dir);
  Manifest manifest = base;
  manifest.values = resolved(config);

  const CampaignResult result =
      run_campaign(baseline_spec(config, config.train.seed, opts.workers));
  print_summary(out, Group::kBaseline, result.summary);

  const BinnedTable curves =
      validation_curves(result.records, config.validation_bins);
  const ResponseShapeCheck check = check_response_shape(curves);
  if (validate_only) {
    const Table vt = validation_table(curves);
    emit_csv(vt, dir / "validation.csv");
    LineChart chart = line_chart_from(vt, 0, {4, 6}, {});
    for (auto& s : chart.series) {
      for (std::size_t b = 0; b < s.x.size(); ++b) {
        s.x[b] = 0.5 * (curves.edges[b] + curves.edges[b + 1]);
      }
    }
    chart.title = "CC response to the others' previous mean";
    chart.x_label = "mean contribution of the other players at t-1";
    chart.y_label = "own contribution at t";
    chart.x_min = 0.0;
    chart.x_max = 1.0;
    emit_svg(chart, dir / "validation.svg");
    manifest.outputs = {(dir / "validation.csv").string(),
                        (dir / "validation.svg").string()};
  } else {
    Table summary(kSummaryColumns);
    add_summary_row(summary, Group::kBaseline, config.train.seed, result.summary,
                    nullptr);
    emit_csv(summary, dir / "summary.csv");
    emit_csv(per_game_table(result.summary), dir / "per_game.csv");
    emit_csv(per_round_table({{"baseline", per_round_means(result.records)}}),
             dir / "per_round.csv");
    manifest.outputs = {(dir / "summary.csv").string(),
                        (dir / "per_game.csv").string(),
                        (dir / "per_round.csv").string()};
    write_baseline_figures(dir, config, result, manifest);
  }
  out << "response curves nondecreasing: " << (check.nondecreasing ? "yes" : "no")
      << " (inversions " << check.inversions[0] << "/" << check.inversions[1]
      << "), high stratum dominates: " << (check.dominance ? "yes" : "no")
      << " over " << check.compared_bins << " bins\n";
  manifest.write(dir / "manifest.txt");
  return kExitOk;
}

int cmd_eval(const ConfigOptions& opts, const std::string& model_path,
             const std::string& out_dir, std::optional<std::uint64_t> baseline_seed,
             const std::string& baseline_file, const Manifest& base,
             const EnvLookup& env, std::ostream& out) {
  const RunConfig config = resolve(opts, env);
  ModelFile model = load_model(model_path);
  const RewardKind kind = parse_reward_kind(model.reward_kind);
  const Group group = group_for(kind);
  const fs::path dir(out_dir);
  ensure_dir(dir);
  Manifest manifest = base;
  manifest.values = resolved(config);

  CampaignSpec spec;
  spec.group = group;
  spec.games = config.games;
  spec.seed = config.train.seed;
  spec.game = config.game;
  spec.model = std::move(model.params);
  spec.policy_mode = config.policy_mode;
  spec.workers = opts.workers;
  const CampaignResult treated = run_campaign(spec);

  const std::uint64_t base_seed = baseline_seed.value_or(config.train.seed + 1);
  const CampaignResult baseline =
      run_campaign(baseline_spec(config, base_seed, opts.workers));
  print_summary(out, Group::kBaseline, baseline.summary);
  print_summary(out, group, treated.summary);

  BaselineSamples samples;
  if (baseline_file.empty()) {
    samples.name = "baseline(seed=" + std::to_string(base_seed) + ")";
    samples.sums = column_of(baseline.summary.per_game, &GameMetrics::sum_contribution);
    samples.props =
        column_of(baseline.summary.per_game, &GameMetrics::prop_over_threshold);
  } else {
    samples.name = fs::path(baseline_file).filename().string();
    samples.sums = read_numeric_column(baseline_file, "sum_contribution");
    samples.props = read_numeric_column(baseline_file, "prop_over_threshold");
  }

  Table summary(kSummaryColumns);
  add_summary_row(summary, Group::kBaseline, base_seed, baseline.summary, nullptr);
  add_summary_row(summary, group, config.train.seed, treated.summary, &samples);
  emit_csv(summary, dir / "summary.csv");
  emit_csv(per_game_table(treated.summary), dir / "per_game.csv");
  emit_csv(per_game_table(baseline.summary), dir / "baseline_per_game.csv");
  emit_csv(per_round_table({{"baseline", per_round_means(baseline.records)},
                            {std::string(to_string(group)),
                             per_round_means(treated.records)}}),
           dir / "per_round.csv");
  const std::string heatmap_name = "heatmap_" + std::string(to_string(group)) + ".csv";
  emit_csv(matrix_table(contribution_heatmap(treated.records, config.heatmap_bins),
                        "round", 1),
           dir / heatmap_name);
  emit_csv(matrix_table(transition_diff(treated.records, baseline.records,
                                        config.transition_bins),
                        "prev_bin"),
           dir / "transition_diff.csv");
  manifest.outputs = {(dir / "summary.csv").string(),
                      (dir / "per_game.csv").string(),
                      (dir / "baseline_per_game.csv").string(),
                      (dir / "per_round.csv").string(),
                      (dir / heatmap_name).string(),
                      (dir / "transition_diff.csv").string()};
  write_baseline_figures(dir, config, baseline, manifest);

  const Table& rows = summary;
  out << to_string(group) << " vs " << samples.name << ": sum U="
      << rows.rows()[1][8] << " p=" << rows.rows()[1][9] << " change="
      << rows.rows()[1][10] << "%; prop U=" << rows.rows()[1][11]
      << " p=" << rows.rows()[1][12] << " change=" << rows.rows()[1][13] << "%\n";
  manifest.write(dir / "manifest.txt");
  return kExitOk;
}

int cmd_stats(const std::string& file_a, const std::string& file_b,
              const std::string& column, const std::string& out_path,
              Manifest manifest, std::ostream& out) {
  const std::vector<double> a = read_numeric_column(file_a, column);
  const std::vector<double> b = read_numeric_column(file_b, column);
  const MannWhitneyResult r = mann_whitney_u(a, b);
  const double mean_a = mean_of(a);
  const double mean_b = mean_of(b);
  const double change = mean_a != 0.0 ? percentage_change(mean_a, mean_b)
                                      : std::numeric_limits<double>::quiet_NaN();
  out << "n_a=" << a.size() << " n_b=" << b.size()
      << " mean_a=" << format_number(mean_a) << " mean_b=" << format_number(mean_b)
      << "\nU=" << format_number(r.u) << " p=" << format_number(r.p_value)
      << (r.exact ? " (exact)" : " (normal approximation)")
      << "\npercentage_change=" << (std::isfinite(change) ? format_number(change) : "n/a")
      << "%\n";
  if (!out_path.empty()) {
    Table t({"n_a", "n_b", "mean_a", "mean_b", "u", "p_value", "method",
             "percentage_change"});
    Table::Row row;
    row << a.size() << b.size() << mean_a << mean_b << r.u << r.p_value
        << (r.exact ? "exact" : "normal") << change;
    t.add(std::move(row));
    const fs::path path(out_path);
    if (!path.parent_path().empty()) ensure_dir(path.parent_path());
    emit_csv(t, path);
    manifest.outputs = {path.string()};
    manifest.write((path.parent_path() / path.stem()).string() + "_manifest.txt");
  }
  return kExitOk;
}

int cmd_report(const std::string& in_dir, std::string out_dir, Manifest manifest,
               std::ostream& out) {
  const fs::path in(in_dir);
  if (!fs::is_directory(in)) {
    throw DataError("input directory '" + in_dir + "' does not exist");
  }
  if (out_dir.empty()) out_dir = in_dir;
  const fs::path dir(out_dir);
  ensure_dir(dir);

  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(in)) {
    if (entry.is_regular_file() && entry.path().extension() == ".csv") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());

  std::vector<std::string> written;
  bool have_validation = false, have_per_round = false, have_heatmap = false,
       have_transition = false, have_training = false;
  for (const fs::path& file : files) {
    const std::string name = file.stem().string();
    const fs::path target = dir / (name + ".svg");
    if (name == "validation") {
      const Table t = read_csv(file);
      std::vector<std::size_t> ys;
      std::vector<double> xs;
      for (std::size_t c = 0; c < t.columns().size(); ++c) {
        const std::string& col = t.columns()[c];
        if (col.size() > 5 && col.substr(col.size() - 5) == "_mean") ys.push_back(c);
      }
      for (std::size_t r = 0; r < t.rows().size(); ++r) {
        xs.push_back(0.5 * (t.number(r, "bin_low") + t.number(r, "bin_high")));
      }
      LineChart chart = line_chart_from(t, 0, ys, xs);
      chart.title = "CC response to the others' previous mean";
      chart.x_label = "mean contribution of the other players at t-1";
      chart.y_label = "own contribution at t";
      chart.x_min = 0.0;
      chart.x_max = 1.0;
      emit_svg(chart, target);
      have_validation = true;
    } else if (name == "per_round") {
      const Table t = read_csv(file);
      std::vector<std::size_t> ys(t.columns().size() - 1);
      std::iota(ys.begin(), ys.end(), std::size_t{1});
      LineChart chart = line_chart_from(t, 0, ys, {});
      chart.title = "Mean contribution per round";
      chart.x_label = "round";
      chart.y_label = "mean contribution";
      emit_svg(chart, target);
      have_per_round = true;
    } else if (name.rfind("heatmap_", 0) == 0) {
      const Matrix m = matrix_from_table(read_csv(file));
      emit_svg(heatmap_chart(m, "CC contribution distribution per round (" +
                                    name.substr(8) + ")",
                             false, "contribution bin", "round"),
               target);
      have_heatmap = true;
    } else if (name == "transition_diff") {
      const Matrix m = matrix_from_table(read_csv(file));
      emit_svg(heatmap_chart(m, "Change in P(next bin | previous bin) vs baseline",
                             true, "contribution bin at t", "contribution bin at t-1"),
               target);
      have_transition = true;
    } else if (name.size() > 4 && name.substr(name.size() - 4) == "_log") {
      const Table t = read_csv(file);
      LineChart chart =
          line_chart_from(t, 0, {t.column_index("mean_episode_reward")}, {});
      const auto& ys = chart.series.front().y;
      chart.y_min = *std::min_element(ys.begin(), ys.end());
      chart.y_max = *std::max_element(ys.begin(), ys.end());
      chart.title = "Mean episodic reward per batch";
      chart.x_label = "batch";
      chart.y_label = "mean episodic reward";
      emit_svg(chart, target);
      have_training = true;
    } else {
      continue;
    }
    written.push_back(target.string());
    out << "wrote " << target.string() << "\n";
  }
  if (written.empty()) {
    throw DataError("no figure inputs found in '" + in_dir + "'");
  }
  const std::pair<bool, const char*> expected[] = {
      {have_validation, "validation (validation.csv)"},
      {have_per_round, "per_round (per_round.csv)"},
      {have_heatmap, "heatmap (heatmap_<group>.csv)"},
      {have_transition, "transition_diff (transition_diff.csv)"},
      {have_training, "training curve (<model>_log.csv)"}};
  for (const auto& [present, label] : expected) {
    if (!present) out << "skipped " << label << ": input not found\n";
  }
  manifest.outputs = written;
  manifest.write(dir / "report_manifest.txt");
  return kExitOk;
}

}  // namespace

std::optional<std::string> process_env(const std::string& name) {
  if (const char* v = std::getenv(name.c_str())) return std::string(v);
  return std::nullopt;
}

int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err, const EnvLookup& env) {
  CLI::App app{"Public goods game simulator with a PPO-trained nudging planner",
               "pgg"};
  app.require_subcommand(1);

  ConfigOptions train_opts, baseline_opts, validate_opts, eval_opts;
  std::string model_out, log_out, out_dir_baseline, out_dir_validate, out_dir_eval,
      model_in, baseline_file, stats_a, stats_b, stats_column, stats_out,
      report_in, report_out;
  std::optional<std::uint64_t> baseline_seed;

  CLI::App* train_cmd = app.add_subcommand("train", "train a planner with PPO");
  add_config_options(*train_cmd, train_opts, true);
  train_cmd->add_option("--out", model_out, "model file to write")->required();
  train_cmd->add_option("--log", log_out, "training log CSV");

  CLI::App* baseline_cmd =
      app.add_subcommand("baseline", "play CC-only evaluation games");
  add_config_options(*baseline_cmd, baseline_opts, false);
  baseline_cmd->add_option("--out-dir", out_dir_baseline, "output directory")
      ->required();

  CLI::App* validate_cmd = app.add_subcommand(
      "validate", "baseline games plus the CC response-curve check");
  add_config_options(*validate_cmd, validate_opts, false);
  validate_cmd->add_option("--out-dir", out_dir_validate, "output directory")
      ->required();

  CLI::App* eval_cmd =
      app.add_subcommand("eval", "evaluate a trained planner against a baseline");
  add_config_options(*eval_cmd, eval_opts, false);
  eval_cmd->add_option("--model", model_in, "trained model file")->required();
  eval_cmd->add_option("--out-dir", out_dir_eval, "output directory")->required();
  eval_cmd->add_option("--baseline-seed", baseline_seed,
                       "seed of the comparison baseline (default seed + 1)");
  eval_cmd->add_option("--baseline-per-game", baseline_file,
                       "per_game.csv of an earlier baseline run for the U-tests");

  CLI::App* stats_cmd =
      app.add_subcommand("stats", "Mann-Whitney U test on two per-game CSVs");
  stats_cmd->add_option("sample_a", stats_a, "baseline CSV")->required();
  stats_cmd->add_option("sample_b", stats_b, "treatment CSV")->required();
  stats_cmd->add_option("--column", stats_column,
                        "column to read when the files have several");
  stats_cmd->add_option("--out", stats_out, "write the result as CSV");

  CLI::App* report_cmd =
      app.add_subcommand("report", "render SVG figures from result CSVs");
  report_cmd->add_option("--in-dir", report_in, "directory of result CSVs")
      ->required();
  report_cmd->add_option("--out-dir", report_out,
                         "SVG directory (default: the input directory)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  Manifest manifest;
  manifest.argv = join_argv(argc, argv);
  try {
    if (*train_cmd) {
      manifest.command = "train";
      return cmd_train(train_opts, model_out, log_out, manifest, env, out);
    }
    if (*baseline_cmd) {
      manifest.command = "baseline";
      return cmd_baseline(baseline_opts, out_dir_baseline, false, manifest, env, out);
    }
    if (*validate_cmd) {
      manifest.command = "validate";
      return cmd_baseline(validate_opts, out_dir_validate, true, manifest, env, out);
    }
    if (*eval_cmd) {
      manifest.command = "eval";
      return cmd_eval(eval_opts, model_in, out_dir_eval, baseline_seed,
                      baseline_file, manifest, env, out);
    }
    if (*stats_cmd) {
      manifest.command = "stats";
      return cmd_stats(stats_a, stats_b, stats_column, stats_out, manifest, out);
    }
    if (*report_cmd) {
      manifest.command = "report";
      return cmd_report(report_in, report_out, manifest, out);
    }
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitUsage;
}

}  // namespace pgg::cli
