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

#include "pgg/rng.hpp"

#include <doctest.h>

#include <cmath>
#include <set>
#include <vector>

using pgg::Rng;

TEST_CASE("same seed gives the same stream") {
  Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("split does not advance the parent and is order independent") {
  Rng parent(9);
  const Rng child_first = parent.split(3);
  (void)parent.split(0);
  (void)parent.split(1);
  CHECK(parent.counter() == 0);
  CHECK(parent.split(3) == child_first);

  Rng x = parent.split(3), y = parent.split(4);
  int equal = 0;
  for (int i = 0; i < 64; ++i) equal += x.next_u64() == y.next_u64();
  CHECK(equal == 0);
}

TEST_CASE("uniform lies in [0, 1) with the right mean") {
  Rng rng(1);
  double sum = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    sum += u;
  }
  CHECK(std::abs(sum / n - 0.5) < 0.005);
}

TEST_CASE("normal draws have unit variance") {
  Rng rng(5);
  double sum = 0.0, sq = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double z = rng.normal();
    sum += z;
    sq += z * z;
  }
  const double mean = sum / n;
  CHECK(std::abs(mean) < 0.01);
  CHECK(std::abs(sq / n - mean * mean - 1.0) < 0.02);
}

TEST_CASE("uniform_index covers its range") {
  Rng rng(3);
  std::set<std::uint64_t> seen;
  for (int i = 0; i < 1000; ++i) {
    const auto v = rng.uniform_index(7);
    REQUIRE(v < 7);
    seen.insert(v);
  }
  CHECK(seen.size() == 7);
  CHECK(rng.uniform_index(1) == 0);
}
