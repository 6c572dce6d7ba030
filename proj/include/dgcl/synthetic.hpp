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

#include <cstddef>
#include <cstdint>
#include <vector>

#include "dgcl/dataio.hpp"

namespace dgcl {

// Corpus with planted structure: items split into equal disjoint
// clusters, every session drawn uniformly from a single cluster.
struct PlantedSpec {
  std::size_t items = 100;
  std::size_t clusters = 5;
  std::size_t session_length = 6;
  std::size_t train_examples = 2000;
  std::size_t test_examples = 500;
  std::uint64_t seed = 7;
};

struct PlantedCorpus {
  std::vector<Session> train_sessions;
  std::vector<Session> test_sessions;
  std::vector<Example> train;
  std::vector<Example> test;
  ItemCatalog catalog;
  std::vector<std::size_t> cluster_of;  // per dense item index
};

// Example counts must be multiples of session_length - 1.
PlantedCorpus make_planted_corpus(const PlantedSpec& spec = {});

}  // namespace dgcl
