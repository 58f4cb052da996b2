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

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "pgg/table_io.hpp"

namespace fs = std::filesystem;
using pgg::cli::run_cli;

namespace {

struct Outcome {
  int code = 0;
  std::string out;
  std::string err;
};

Outcome run(std::vector<std::string> args,
            const std::map<std::string, std::string>& env = {}) {
  args.insert(args.begin(), "pgg");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  Outcome o;
  o.code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err,
                   [&](const std::string& name) -> std::optional<std::string> {
                     auto it = env.find(name);
                     if (it == env.end()) return std::nullopt;
                     return it->second;
                   });
  o.out = out.str();
  o.err = err.str();
  return o;
}

fs::path fresh_dir(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "pgg_cli_test" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

double summary_games(const fs::path& dir) {
  return pgg::read_csv(dir / "summary.csv").number(0, "games");
}

// Every .csv and .svg file in `a` exists in `b` with the same bytes.
void check_same_outputs(const fs::path& a, const fs::path& b) {
  std::size_t compared = 0;
  for (const auto& entry : fs::directory_iterator(a)) {
    const auto ext = entry.path().extension();
    if (ext != ".csv" && ext != ".svg") continue;
    const auto other = b / entry.path().filename();
    REQUIRE(fs::exists(other));
    CHECK_MESSAGE(slurp(entry.path()) == slurp(other), entry.path().filename());
    ++compared;
  }
  CHECK(compared > 0);
}

}  // namespace

TEST_CASE("usage errors exit with 2") {
  CHECK(run({}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({"baseline", "--no-such-flag"}).code == 2);
  const auto train = run({"train", "--out", (fresh_dir("usage") / "m.json").string()});
  CHECK(train.code == 2);
  CHECK(train.err.find("--reward") != std::string::npos);
  CHECK(run({"baseline", "--games", "-3"}).code == 2);
  CHECK(run({"baseline", "--bm-form", "sideways"}).code == 2);
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("baseline writes its outputs") {
  const auto dir = fresh_dir("baseline");
  const auto o = run({"baseline", "--games", "20", "--seed", "4", "--out-dir", dir.string()});
  REQUIRE(o.code == 0);
  for (const char* f : {"summary.csv", "per_game.csv", "per_round.csv", "validation.csv",
                        "heatmap_baseline.csv", "manifest.txt"}) {
    CHECK_MESSAGE(fs::exists(dir / f), f);
  }
  CHECK(summary_games(dir) == 20);
  CHECK(pgg::read_csv(dir / "per_game.csv").rows().size() == 20);
  CHECK(pgg::read_csv(dir / "per_round.csv").rows().size() == 25);
  CHECK(slurp(dir / "manifest.txt").find("seed = 4") != std::string::npos);
}

TEST_CASE("configuration precedence: defaults < file < environment < flags") {
  const auto dir = fresh_dir("precedence");
  const auto cfg = dir / "run.cfg";
  pgg::write_text_file(cfg, "# small run\ngames = 5\nseed = 2\n");
  const auto out = dir / "out";

  REQUIRE(run({"baseline", "--config", cfg.string(), "--out-dir", out.string()}).code == 0);
  CHECK(summary_games(out) == 5);

  REQUIRE(run({"baseline", "--config", cfg.string(), "--out-dir", out.string()},
              {{"PGG_GAMES", "7"}}).code == 0);
  CHECK(summary_games(out) == 7);

  REQUIRE(run({"baseline", "--config", cfg.string(), "--games", "9", "--out-dir", out.string()},
              {{"PGG_GAMES", "7"}}).code == 0);
  CHECK(summary_games(out) == 9);

  pgg::write_text_file(cfg, "games = 5\nthis is not a setting\n");
  const auto bad = run({"baseline", "--config", cfg.string(), "--out-dir", out.string()});
  CHECK(bad.code == 3);
  CHECK(bad.err.find("line 2") != std::string::npos);

  pgg::write_text_file(cfg, "no_such_key = 1\n");
  CHECK(run({"baseline", "--config", cfg.string(), "--out-dir", out.string()}).code != 0);
  CHECK(run({"baseline", "--out-dir", out.string()}, {{"PGG_GAMES", "many"}}).code != 0);
}

TEST_CASE("reruns are byte-identical for any worker count") {
  const auto a = fresh_dir("det_a"), b = fresh_dir("det_b");
  REQUIRE(run({"baseline", "--games", "50", "--seed", "8", "--out-dir", a.string()}).code == 0);
  REQUIRE(run({"baseline", "--games", "50", "--seed", "8", "--workers", "3", "--out-dir",
               b.string()}).code == 0);
  check_same_outputs(a, b);
}

TEST_CASE("train, eval, stats and report work end to end") {
  const auto dir = fresh_dir("pipeline");
  const auto model = dir / "sum.json";
  const std::vector<std::string> train_args = {
      "train", "--reward", "sum", "--total-steps", "200", "--batch-steps", "100",
      "--sgd-minibatch-size", "50", "--num-sgd-iterations", "2", "--seed", "3",
      "--out", model.string()};
  REQUIRE(run(train_args).code == 0);
  CHECK(fs::exists(model));
  CHECK(pgg::read_csv(dir / "sum_log.csv").rows().size() == 2);
  CHECK(fs::exists(dir / "sum_manifest.txt"));

  auto second = train_args;
  second.back() = (dir / "again.json").string();
  second.insert(second.end() - 2, {"--workers", "2"});
  REQUIRE(run(second).code == 0);
  CHECK(slurp(model) == slurp(dir / "again.json"));

  const auto eval_a = dir / "eval_a", eval_b = dir / "eval_b";
  REQUIRE(run({"eval", "--model", model.string(), "--games", "30", "--seed", "1",
               "--out-dir", eval_a.string()}).code == 0);
  REQUIRE(run({"eval", "--model", model.string(), "--games", "30", "--seed", "1",
               "--workers", "2", "--out-dir", eval_b.string()}).code == 0);
  for (const char* f : {"summary.csv", "per_game.csv", "baseline_per_game.csv", "per_round.csv",
                        "heatmap_sum-drl.csv", "transition_diff.csv"}) {
    CHECK_MESSAGE(fs::exists(eval_a / f), f);
  }
  const auto summary = pgg::read_csv(eval_a / "summary.csv");
  CHECK(summary.rows().size() == 2);
  CHECK(summary.rows()[1][0] == "sum-drl");
  check_same_outputs(eval_a, eval_b);

  const auto report_a = dir / "report_a", report_b = dir / "report_b";
  fs::copy_file(dir / "sum_log.csv", eval_a / "sum_log.csv");
  REQUIRE(run({"report", "--in-dir", eval_a.string(), "--out-dir", report_a.string()}).code == 0);
  REQUIRE(run({"report", "--in-dir", eval_a.string(), "--out-dir", report_b.string()}).code == 0);
  CHECK(fs::exists(report_a / "validation.svg"));
  CHECK(fs::exists(report_a / "per_round.svg"));
  CHECK(fs::exists(report_a / "transition_diff.svg"));
  check_same_outputs(report_a, report_b);

  const auto stats = run({"stats", (eval_a / "per_game.csv").string(),
                          (eval_a / "baseline_per_game.csv").string(), "--column",
                          "sum_contribution", "--out", (dir / "stats.csv").string()});
  CHECK(stats.code == 0);
  CHECK(stats.out.find("U") != std::string::npos);
  CHECK(fs::exists(dir / "stats.csv"));

  CHECK(run({"eval", "--model", (dir / "missing.json").string(), "--out-dir",
             (dir / "x").string()}).code == 3);
}

TEST_CASE("stats reports malformed input with its line number") {
  const auto dir = fresh_dir("stats");
  pgg::write_text_file(dir / "a.txt", "1\n2\n3\n");
  pgg::write_text_file(dir / "b.txt", "4\n5\nsix\n");
  const auto o = run({"stats", (dir / "a.txt").string(), (dir / "b.txt").string()});
  CHECK(o.code == 3);
  CHECK(o.err.find("line 3") != std::string::npos);

  pgg::write_text_file(dir / "b.txt", "4\n5\n6\n");
  const auto ok = run({"stats", (dir / "a.txt").string(), (dir / "b.txt").string()});
  CHECK(ok.code == 0);
  CHECK(ok.out.find("0.1") != std::string::npos);
  CHECK(run({"stats", (dir / "a.txt").string(), (dir / "none.txt").string()}).code == 3);
}

TEST_CASE("report renders what it finds and lists the rest") {
  const auto in = fresh_dir("report_in");
  const auto src = fresh_dir("report_src");
  REQUIRE(run({"baseline", "--games", "10", "--out-dir", src.string()}).code == 0);
  fs::copy_file(src / "validation.csv", in / "validation.csv");
  const auto out = in / "figures";
  const auto o = run({"report", "--in-dir", in.string(), "--out-dir", out.string()});
  CHECK(o.code == 0);
  CHECK(fs::exists(out / "validation.svg"));
  CHECK_FALSE(fs::exists(out / "per_round.svg"));
  CHECK(o.out.find("skipped per_round") != std::string::npos);

  const auto empty = fresh_dir("report_empty");
  CHECK(run({"report", "--in-dir", empty.string(), "--out-dir", (empty / "f").string()}).code == 3);

  pgg::write_text_file(in / "per_round.csv", "round,baseline_cc_mean\n1,0.5\n2\n");
  const auto broken = run({"report", "--in-dir", in.string(), "--out-dir", out.string()});
  CHECK(broken.code == 3);
  CHECK(broken.err.find("line 3") != std::string::npos);
}

TEST_CASE("validate prints the response shape check") {
  const auto dir = fresh_dir("validate");
  const auto o = run({"validate", "--games", "30", "--out-dir", dir.string()});
  CHECK(o.code == 0);
  CHECK(fs::exists(dir / "validation.csv"));
  CHECK(fs::exists(dir / "validation.svg"));
  CHECK(o.out.find("nondecreasing") != std::string::npos);
}
