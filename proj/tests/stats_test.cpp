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

#include "pgg/stats.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "pgg/error.hpp"

using namespace pgg;

namespace {

// U of `a` by direct pair counting.
double pair_count_u(const std::vector<double>& a, const std::vector<double>& b) {
  double u = 0.0;
  for (double x : a) {
    for (double y : b) u += x > y ? 1.0 : (x == y ? 0.5 : 0.0);
  }
  return u;
}

// Two-sided exact p by relabelling the pooled values in every possible way.
double relabel_p(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> pooled(a);
  pooled.insert(pooled.end(), b.begin(), b.end());
  std::vector<int> label(pooled.size(), 1);
  std::fill(label.begin(), label.begin() + static_cast<long>(a.size()), 0);
  const double mean = 0.5 * static_cast<double>(a.size() * b.size());
  const double observed = std::abs(pair_count_u(a, b) - mean);
  long extreme = 0, total = 0;
  std::sort(label.begin(), label.end());
  do {
    std::vector<double> x, y;
    for (std::size_t i = 0; i < pooled.size(); ++i) {
      (label[i] == 0 ? x : y).push_back(pooled[i]);
    }
    ++total;
    if (std::abs(pair_count_u(x, y) - mean) >= observed - 1e-9) ++extreme;
  } while (std::next_permutation(label.begin(), label.end()));
  return static_cast<double>(extreme) / static_cast<double>(total);
}

EpisodeRecord constant_record(double value, std::vector<AgentRole> roster = {
                                  AgentRole::kCc, AgentRole::kCc,
                                  AgentRole::kCc, AgentRole::kCc}) {
  EpisodeRecord r;
  r.roster = std::move(roster);
  for (std::size_t t = 1; t <= 25; ++t) {
    r.rounds.push_back(RoundResult{t, std::vector<double>(4, value), std::vector<double>(4, 1.0)});
  }
  return r;
}

}  // namespace

TEST_CASE("Mann-Whitney worked examples") {
  const auto r = mann_whitney_u(std::vector{1.0, 2.0, 3.0}, std::vector{4.0, 5.0, 6.0});
  CHECK(r.u == 0.0);
  CHECK(r.exact);
  CHECK(r.p_value == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(r.p_value == doctest::Approx(relabel_p({1, 2, 3}, {4, 5, 6})));

  const auto same = mann_whitney_u(std::vector{1.0, 2.0, 3.0}, std::vector{1.0, 2.0, 3.0});
  CHECK(same.u == 4.5);
  CHECK(same.p_value >= 0.99);
}

TEST_CASE("Mann-Whitney symmetry and range on fuzzed samples") {
  Rng rng(50);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t na = 1 + rng.uniform_index(9);
    const std::size_t nb = 1 + rng.uniform_index(9);
    std::vector<double> a(na), b(nb);
    for (double& x : a) x = static_cast<double>(rng.uniform_index(6));
    for (double& x : b) x = static_cast<double>(rng.uniform_index(6));
    const auto ab = mann_whitney_u(a, b);
    const auto ba = mann_whitney_u(b, a);
    REQUIRE(ab.u >= 0.0);
    REQUIRE(ab.u <= static_cast<double>(na * nb));
    REQUIRE(ab.u == doctest::Approx(pair_count_u(a, b)));
    REQUIRE(ba.u == doctest::Approx(static_cast<double>(na * nb) - ab.u));
    REQUIRE(ba.p_value == doctest::Approx(ab.p_value).epsilon(1e-12));
    if (na + nb <= 12) {
      REQUIRE(ab.p_value == doctest::Approx(relabel_p(a, b)).epsilon(1e-12));
    }
  }
}

TEST_CASE("exact and normal p-values agree for 8 against 8") {
  Rng rng(51);
  double worst = 0.0;
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<double> a(8), b(8);
    for (double& x : a) x = static_cast<double>(rng.uniform_index(100));
    for (double& x : b) x = static_cast<double>(rng.uniform_index(100));
    const double pe = mann_whitney_u(a, b, PValueMethod::kExact).p_value;
    const double pn = mann_whitney_u(a, b, PValueMethod::kNormal).p_value;
    worst = std::max(worst, std::abs(pe - pn));
  }
  MESSAGE("max |p_exact - p_normal| " << worst);
  CHECK(worst < 0.02);
}

TEST_CASE("large samples use the normal approximation") {
  std::vector<double> a, b;
  for (int i = 0; i < 200; ++i) {
    a.push_back(i);
    b.push_back(i + 30);
  }
  const auto r = mann_whitney_u(a, b);
  CHECK_FALSE(r.exact);
  CHECK(r.p_value < 0.01);
  CHECK(mann_whitney_u(a, a).p_value == doctest::Approx(1.0));
}

TEST_CASE("Mann-Whitney rejects empty samples") {
  CHECK_THROWS_AS(mann_whitney_u(std::vector<double>{}, std::vector{1.0}), ContractViolation);
  CHECK_THROWS_AS(mann_whitney_u(std::vector{1.0}, std::vector<double>{}), ContractViolation);
}

TEST_CASE("percentage_change") {
  CHECK(std::round(100.0 * percentage_change(36.995, 40.035)) / 100.0 == doctest::Approx(8.22));
  CHECK(std::round(100.0 * percentage_change(0.491, 0.56)) / 100.0 == doctest::Approx(14.05));
  CHECK(percentage_change(2.5, 2.5) == 0.0);
  CHECK_THROWS_AS(percentage_change(0.0, 1.0), ContractViolation);
}

TEST_CASE("summarize worked examples") {
  const std::vector<EpisodeRecord> ones{constant_record(1.0)};
  const auto s = summarize(ones, 0.5);
  CHECK(s.games == 1);
  CHECK(s.sum_contribution_mean == doctest::Approx(100.0));
  CHECK(s.prop_over_threshold_mean == 1.0);
  CHECK(s.cc_sum_contribution_mean == doctest::Approx(100.0));
  CHECK(s.cc_round_means == std::vector<double>(25, 1.0));
  CHECK(s.planner_round_means.empty());

  const std::vector<EpisodeRecord> zeros{constant_record(0.0)};
  CHECK(summarize(zeros, 0.5).sum_contribution_mean == 0.0);
  CHECK(summarize(zeros, 0.5).prop_over_threshold_mean == 0.0);

  const std::vector<EpisodeRecord> halves{constant_record(0.5)};
  CHECK(summarize(halves, 0.5).prop_over_threshold_mean == 0.0);
  CHECK(summarize(halves, 0.5).sum_contribution_mean == doctest::Approx(50.0));
}

TEST_CASE("summarize separates CC and planner seats") {
  auto rec = constant_record(1.0, {AgentRole::kCc, AgentRole::kCc, AgentRole::kCc,
                                   AgentRole::kPlannerSum});
  for (auto& round : rec.rounds) round.contributions[3] = 0.0;
  const std::vector<EpisodeRecord> records{rec};
  const auto s = summarize(records, 0.5);
  CHECK(s.sum_contribution_mean == doctest::Approx(75.0));
  CHECK(s.prop_over_threshold_mean == doctest::Approx(0.75));
  CHECK(s.cc_sum_contribution_mean == doctest::Approx(75.0));
  CHECK(s.cc_prop_over_threshold_mean == 1.0);
  CHECK(s.planner_round_means == std::vector<double>(25, 0.0));
}

TEST_CASE("summarize is permutation invariant and bounded") {
  Rng rng(60);
  std::vector<EpisodeRecord> records;
  for (int g = 0; g < 30; ++g) {
    auto r = constant_record(0.0);
    for (auto& round : r.rounds) {
      for (double& a : round.contributions) a = rng.uniform();
    }
    records.push_back(r);
  }
  const auto s = summarize(records, 0.5);
  std::vector<EpisodeRecord> shuffled(records.rbegin(), records.rend());
  std::swap(shuffled[3], shuffled[17]);
  const auto t = summarize(shuffled, 0.5);
  CHECK(s.sum_contribution_mean == doctest::Approx(t.sum_contribution_mean).epsilon(1e-12));
  CHECK(s.prop_over_threshold_mean == doctest::Approx(t.prop_over_threshold_mean).epsilon(1e-12));
  for (std::size_t i = 0; i < 25; ++i) {
    CHECK(s.cc_round_means[i] == doctest::Approx(t.cc_round_means[i]).epsilon(1e-12));
  }
  CHECK(s.sum_contribution_mean >= 0.0);
  CHECK(s.sum_contribution_mean <= 100.0);
}

TEST_CASE("summarize rejects mixed rosters and empty input") {
  std::vector<EpisodeRecord> mixed{
      constant_record(1.0),
      constant_record(1.0, {AgentRole::kCc, AgentRole::kCc, AgentRole::kCc,
                            AgentRole::kPlannerProp})};
  CHECK_THROWS_AS(summarize(mixed, 0.5), ContractViolation);
  CHECK_THROWS_AS(summarize(std::vector<EpisodeRecord>{}, 0.5), ContractViolation);
}
