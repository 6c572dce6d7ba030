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


// A 20-example ranking fixture with hand-placed target ranks, shared by
// the metric tests and the acceptance suite.

#pragma once

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <vector>

namespace dgcl::fixtures {

struct RankedExample {
  std::vector<double> scores;
  std::size_t target;
  std::size_t prefix_length;
};

inline constexpr std::size_t kFixtureItems = 30;

// Target ranks the fixture is built to produce. Examples with `tie`
// place an equal-scoring item at a lower index ahead of the target.
struct Placement {
  std::size_t rank;
  std::size_t target;
  bool tie;
  std::size_t prefix_length;
};

inline const std::vector<Placement>& placements() {
  static const std::vector<Placement> p{
      {1, 0, false, 1},   {2, 5, false, 2},   {3, 29, false, 3}, {5, 7, true, 6},    {8, 12, false, 4},
      {10, 3, true, 5},   {11, 14, false, 2}, {15, 1, false, 7}, {20, 20, true, 1},  {21, 9, false, 3},
      {1, 17, false, 8},  {4, 2, false, 5},   {7, 28, true, 2},  {9, 11, false, 9},  {12, 6, false, 4},
      {19, 22, true, 6},  {25, 4, false, 1},  {30, 16, false, 5}, {2, 25, true, 3},  {6, 10, false, 10},
  };
  return p;
}

// Scores: the target gets 0.5; rank - 1 other items get higher scores
// (one of them tied at 0.5 with a lower index when `tie` is set and the
// target index allows it); everything else gets lower scores.
inline std::vector<RankedExample> ranking_fixture() {
  std::vector<RankedExample> out;
  for (const auto& p : placements()) {
    RankedExample ex{std::vector<double>(kFixtureItems, 0.0), p.target, p.prefix_length};
    std::vector<std::size_t> others;
    for (std::size_t i = 0; i < kFixtureItems; ++i)
      if (i != p.target) others.push_back(i);
    std::size_t ahead = p.rank - 1;
    ex.scores[p.target] = 0.5;
    if (p.tie && ahead > 0 && p.target > 0) {
      ex.scores[0] = 0.5;  // index 0 < target wins the tie
      others.erase(others.begin());
      --ahead;
    }
    for (std::size_t i = 0; i < others.size(); ++i)
      ex.scores[others[i]] = i < ahead ? 0.9 - 0.01 * static_cast<double>(i) : 0.1 - 0.001 * static_cast<double>(i);
    out.push_back(ex);
  }
  return out;
}

// Rank by full sort: score descending, index ascending.
inline std::size_t exhaustive_rank(const RankedExample& ex) {
  std::vector<std::size_t> order(ex.scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return ex.scores[a] > ex.scores[b]; });
  return static_cast<std::size_t>(std::find(order.begin(), order.end(), ex.target) - order.begin()) + 1;
}

}  // namespace dgcl::fixtures
