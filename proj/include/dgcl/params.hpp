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
#include <functional>
#include <string>
#include <vector>

#include "dgcl/autograd.hpp"
#include "dgcl/config.hpp"
#include "dgcl/contrast.hpp"
#include "dgcl/disentangle.hpp"
#include "dgcl/encoder.hpp"
#include "dgcl/propagation.hpp"

namespace dgcl {

// Every trainable tensor of the model.
struct ParameterSet {
  Parameter embedding;  // N x d
  FactorProjectionT<Parameter> projection;
  GgnnWeightsT<Parameter> original;
  std::vector<GgnnWeightsT<Parameter>> factor;  // K channels at width d_f
  GgnnWeightsT<Parameter> star;
  AttentionWeightsT<Parameter> item_attention;
  std::vector<AttentionWeightsT<Parameter>> factor_attention;  // K sets, or one when shared
  DiscriminatorT<Parameter> discriminator;  // bilinear form only

  using Visitor = std::function<void(const std::string& channel, const std::string& name, Parameter&)>;
  // Stable traversal order; checkpoints and the optimizer rely on it.
  // The discriminator is skipped unless `with_discriminator`.
  void for_each(const Visitor& f, bool with_discriminator);

  std::size_t num_items() const { return embedding.value.rows(); }
  void zero_grad(bool with_discriminator = true);
};

// Shapes for `cfg` over a catalog of `num_items`, all zeros.
ParameterSet zero_parameters(const TrainConfig& cfg, std::size_t num_items);

// Uniform(-1/sqrt(d), 1/sqrt(d)) per tensor from a per-name substream of
// `seed`; bilinear discriminators start at the identity.
ParameterSet init_parameters(const TrainConfig& cfg, std::size_t num_items, std::uint64_t seed);

// Views of a parameter set as tape leaves.
struct BoundParameters {
  ag::Var embedding;
  FactorProjectionVars projection;
  GgnnVars original;
  std::vector<GgnnVars> factor;
  GgnnVars star;
  AttentionVars item_attention;
  std::vector<AttentionVars> factor_attention;
  Discriminator item_disc;
  Discriminator factor_disc;
};

BoundParameters bind(ag::Tape& tape, ParameterSet& params, DiscriminatorForm form);

}  // namespace dgcl
