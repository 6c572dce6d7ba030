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
#include <string>
#include <string_view>
#include <vector>

#include "dgcl/contrast.hpp"
#include "json.hpp"

namespace dgcl {

// Model variants: the full model and three ablations.
//   fcl  - no factor-level contrastive term (alpha forced to 1)
//   star - item-level view from edge/node dropout instead of the star graph
//   fp   - predict with the item-level head only
enum class Variant { kFull, kFcl, kStar, kFp };

std::string_view to_string(Variant v);
Variant parse_variant(std::string_view s);
std::string_view to_string(DiscriminatorForm f);
DiscriminatorForm parse_discriminator(std::string_view s);
std::string_view to_string(FactorNegatives f);
FactorNegatives parse_factor_negatives(std::string_view s);

struct TrainConfig {
  std::size_t d = 100;
  std::size_t factors = 5;
  std::size_t layers = 1;
  double theta = 0.3;
  double alpha = 0.5;
  double beta1 = 0.05;
  double beta2 = 0.01;
  double learning_rate = 1e-3;
  std::size_t epochs = 30;
  std::size_t batch_size = 100;
  std::uint64_t seed = 42;
  Variant variant = Variant::kFull;
  DiscriminatorForm discriminator = DiscriminatorForm::kDot;
  FactorNegatives factor_negatives = FactorNegatives::kWithinView;
  std::size_t negatives_per_positive = 1;

  bool normalize_adjacency = true;
  bool bias_inside = false;
  bool normalize_attention = false;
  bool share_factor_attention = false;

  double dropout_edge = 0.2;
  double dropout_node = 0.1;

  bool early_stopping = false;
  std::size_t patience = 3;
  double validation_fraction = 0.1;

  std::size_t factor_dim() const;
  // alpha after the variant's overrides.
  double effective_alpha() const;
  ContrastConfig contrast() const;

  // Throws std::invalid_argument naming the first bad field.
  void validate() const;
};

nlohmann::json to_json(const TrainConfig& cfg);
TrainConfig config_from_json(const nlohmann::json& j);

}  // namespace dgcl
