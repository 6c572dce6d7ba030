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

#include "dgcl/synthetic.hpp"

#include <stdexcept>

#include "dgcl/random.hpp"

namespace dgcl {

PlantedCorpus make_planted_corpus(const PlantedSpec& spec) {
  if (spec.clusters == 0 || spec.items % spec.clusters != 0) throw std::invalid_argument("planted corpus: items must split evenly into clusters");
  if (spec.session_length < 2) throw std::invalid_argument("planted corpus: sessions need at least two items");
  const std::size_t per_session = spec.session_length - 1;
  if (spec.train_examples % per_session != 0 || spec.test_examples % per_session != 0) {
    throw std::invalid_argument("planted corpus: example counts must be multiples of session_length - 1");
  }
  PlantedCorpus corpus;
  const std::size_t cluster_size = spec.items / spec.clusters;
  for (std::size_t i = 0; i < spec.items; ++i) {
    corpus.catalog.add("item" + std::to_string(i));
    corpus.cluster_of.push_back(i / cluster_size);
  }
  Rng rng(derive_seed(spec.seed, Stream::kSynthetic));
  auto draw = [&](std::size_t count, std::vector<Session>& out) {
    for (std::size_t s = 0; s < count; ++s) {
      const std::size_t cluster = rng.below(spec.clusters);
      Session session;
      session.last_timestamp = static_cast<double>(out.size());
      for (std::size_t p = 0; p < spec.session_length; ++p) session.items.push_back(cluster * cluster_size + rng.below(cluster_size));
      out.push_back(std::move(session));
    }
  };
  draw(spec.train_examples / per_session, corpus.train_sessions);
  draw(spec.test_examples / per_session, corpus.test_sessions);
  corpus.train = prefix_augment(corpus.train_sessions);
  corpus.test = prefix_augment(corpus.test_sessions);
  return corpus;
}

}  // namespace dgcl
