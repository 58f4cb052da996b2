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

#include <cstdint>
#include <limits>

namespace pgg {

// Counter-based random stream.
//
// Output i of a stream is a SplitMix64-style finalizer applied to
// key + (i + 1) * golden_gamma, so a stream is fully described by its
// (key, counter) pair. `split(i)` derives an independent child key from the
// parent key and an index without advancing the parent, which lets a master
// seed fan out to per-game or per-episode streams whose contents do not
// depend on evaluation order.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed) : key_(mix(seed ^ kSeedSalt)) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() { return next_u64(); }

  std::uint64_t next_u64() {
    ++counter_;
    return mix(key_ + counter_ * kGamma);
  }

  // Uniform double in [0, 1) with 53 random bits.
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Standard normal via Box-Muller; consumes exactly two outputs.
  double normal();

  // Unbiased integer in [0, n).
  std::uint64_t uniform_index(std::uint64_t n);

  // Child stream for `index`; the parent is not advanced.
  Rng split(std::uint64_t index) const {
    return Rng(Key{mix(mix(key_) ^ mix(index + kSplitSalt))});
  }

  std::uint64_t key() const { return key_; }
  std::uint64_t counter() const { return counter_; }

  friend bool operator==(const Rng&, const Rng&) = default;

 private:
  struct Key {
    std::uint64_t value;
  };
  explicit Rng(Key k) : key_(k.value) {}

  static constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ull;
  static constexpr std::uint64_t kSeedSalt = 0x243f6a8885a308d3ull;
  static constexpr std::uint64_t kSplitSalt = 0x632be59bd9b4e019ull;

  static constexpr std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace pgg
