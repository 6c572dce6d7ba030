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
#include <span>

#include "dgcl/autograd.hpp"
#include "dgcl/config.hpp"
#include "dgcl/dataio.hpp"
#include "dgcl/params.hpp"
#include "dgcl/predictor.hpp"

namespace dgcl {

// Loss components of one batch as tape nodes.
struct BatchLossVars {
  ag::Var prediction;    // L_p, averaged over the batch
  ag::Var item_cl;       // item-level contrastive term, averaged over sessions
  ag::Var factor_cl;     // factor-level term, summed over factors, averaged over sessions
  ag::Var contrastive;   // alpha mix of the two
  ag::Var independence;  // L_d over the batch's unique items
  ag::Var total;
};

struct LossValues {
  double prediction = 0.0;
  double item_cl = 0.0;
  double factor_cl = 0.0;
  double contrastive = 0.0;
  double independence = 0.0;
  double total = 0.0;
};

LossValues values_of(const BatchLossVars& v);

class Model {
 public:
  Model(TrainConfig config, ParameterSet params);
  // Fresh parameters from config.seed.
  static Model initialize(const TrainConfig& config, std::size_t num_items);

  const TrainConfig& config() const { return config_; }
  ParameterSet& params() { return params_; }
  const ParameterSet& params() const { return params_; }
  std::size_t num_items() const { return params_.num_items(); }

  // Records the full training objective for `batch`. `example_ids` are the
  // examples' positions in the training set and, with `epoch`, seed the
  // star edges, dropout masks and negative samples of each session.
  BatchLossVars forward(ag::Tape& tape, std::span<const Example> batch, std::span<const std::size_t> example_ids,
                        std::size_t epoch);

  // Factor-space catalog, reused across predictions until the weights change.
  Matrix catalog_factor() const;

  // Scores of every catalog item for one prefix. `factor_catalog` comes
  // from catalog_factor() and may be empty for the item-only variant.
  ScoreVector predict(const Session& prefix, const Matrix& factor_catalog) const;
  ScoreVector predict(const Session& prefix) const { return predict(prefix, catalog_factor()); }

  bool uses_factor_head() const { return config_.variant != Variant::kFp; }

 private:
  TrainConfig config_;
  ParameterSet params_;
};

}  // namespace dgcl
