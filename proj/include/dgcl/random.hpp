// Copyright 2026 The DGCL Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace dgcl {

// Named random substreams. Every consumer derives its own seed from the
// run seed plus a tag and indices, so the draws a session sees do not
// depend on processing order.
enum class Stream : std::uint64_t {
  kInit = 1,
  kStar = 2,
  kNegatives = 3,
  kDropout = 4,
  kShuffle = 5,
  kSynthetic = 6,
};

std::uint64_t splitmix64(std::uint64_t x);

std::uint64_t derive_seed(std::uint64_t base, Stream stream, std::uint64_t a = 0, std::uint64_t b = 0);

// Hash of a string, for parameter-name keyed streams.
std::uint64_t hash_name(std::string_view name);

// 64-bit Mersenne Twister with draws defined bit-for-bit here rather than
// through the implementation-defined std distributions.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  // Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  // Uniform in [0, n). n must be positive.
  std::uint64_t below(std::uint64_t n);
  bool bernoulli(double p) { return uniform() < p; }
  double normal();

 private:
  std::mt19937_64 engine_;
};

}  // namespace dgcl
