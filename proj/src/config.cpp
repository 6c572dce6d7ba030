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

#include "dgcl/config.hpp"

#include <stdexcept>

namespace dgcl {

std::string_view to_string(Variant v) {
  switch (v) {
    case Variant::kFull:
      return "full";
    case Variant::kFcl:
      return "fcl";
    case Variant::kStar:
      return "star";
    case Variant::kFp:
      return "fp";
  }
  return "?";
}

Variant parse_variant(std::string_view s) {
  if (s == "full") return Variant::kFull;
  if (s == "fcl") return Variant::kFcl;
  if (s == "star") return Variant::kStar;
  if (s == "fp") return Variant::kFp;
  throw std::invalid_argument("unknown variant '" + std::string(s) + "' (expected full, fcl, star or fp)");
}

std::string_view to_string(DiscriminatorForm f) { return f == DiscriminatorForm::kDot ? "dot" : "bilinear"; }

DiscriminatorForm parse_discriminator(std::string_view s) {
  if (s == "dot") return DiscriminatorForm::kDot;
  if (s == "bilinear") return DiscriminatorForm::kBilinear;
  throw std::invalid_argument("unknown discriminator '" + std::string(s) + "' (expected dot or bilinear)");
}

std::string_view to_string(FactorNegatives f) { return f == FactorNegatives::kWithinView ? "within_view" : "cross_view"; }

FactorNegatives parse_factor_negatives(std::string_view s) {
  if (s == "within_view") return FactorNegatives::kWithinView;
  if (s == "cross_view") return FactorNegatives::kCrossView;
  throw std::invalid_argument("unknown factor_negatives '" + std::string(s) + "' (expected within_view or cross_view)");
}

std::size_t TrainConfig::factor_dim() const { return factors == 0 ? 0 : d / factors; }

double TrainConfig::effective_alpha() const { return variant == Variant::kFcl ? 1.0 : alpha; }

ContrastConfig TrainConfig::contrast() const {
  return ContrastConfig{effective_alpha(), negatives_per_positive, factor_negatives};
}

void TrainConfig::validate() const {
  auto fail = [](const std::string& what) { throw std::invalid_argument("config: " + what); };
  if (d == 0) fail("d must be positive");
  if (factors == 0) fail("K must be positive");
  if (factor_dim() == 0) fail("d / K must be at least 1");
  if (!(theta >= 0.0 && theta <= 1.0)) fail("theta must lie in [0, 1]");
  if (!(alpha >= 0.0 && alpha <= 1.0)) fail("alpha must lie in [0, 1]");
  if (!(beta1 >= 0.0) || !(beta2 >= 0.0)) fail("beta1 and beta2 must be non-negative");
  if (!(learning_rate > 0.0)) fail("learning rate must be positive");
  if (batch_size == 0) fail("batch size must be positive");
  if (negatives_per_positive == 0) fail("negatives per positive must be positive");
  if (!(dropout_edge >= 0.0 && dropout_edge <= 1.0)) fail("dropout_edge must lie in [0, 1]");
  if (!(dropout_node >= 0.0 && dropout_node <= 1.0)) fail("dropout_node must lie in [0, 1]");
  if (!(validation_fraction > 0.0 && validation_fraction < 1.0)) fail("validation fraction must lie in (0, 1)");
}

nlohmann::json to_json(const TrainConfig& c) {
  return nlohmann::json{{"d", c.d},
                        {"K", c.factors},
                        {"layers", c.layers},
                        {"theta", c.theta},
                        {"alpha", c.alpha},
                        {"beta1", c.beta1},
                        {"beta2", c.beta2},
                        {"lr", c.learning_rate},
                        {"epochs", c.epochs},
                        {"batch_size", c.batch_size},
                        {"seed", c.seed},
                        {"variant", to_string(c.variant)},
                        {"discriminator", to_string(c.discriminator)},
                        {"factor_negatives", to_string(c.factor_negatives)},
                        {"negatives", c.negatives_per_positive},
                        {"normalize_adjacency", c.normalize_adjacency},
                        {"bias_inside", c.bias_inside},
                        {"normalize_attention", c.normalize_attention},
                        {"share_factor_attention", c.share_factor_attention},
                        {"dropout_edge", c.dropout_edge},
                        {"dropout_node", c.dropout_node},
                        {"early_stopping", c.early_stopping},
                        {"patience", c.patience},
                        {"validation_fraction", c.validation_fraction}};
}

TrainConfig config_from_json(const nlohmann::json& j) {
  TrainConfig c;
  c.d = j.value("d", c.d);
  c.factors = j.value("K", c.factors);
  c.layers = j.value("layers", c.layers);
  c.theta = j.value("theta", c.theta);
  c.alpha = j.value("alpha", c.alpha);
  c.beta1 = j.value("beta1", c.beta1);
  c.beta2 = j.value("beta2", c.beta2);
  c.learning_rate = j.value("lr", c.learning_rate);
  c.epochs = j.value("epochs", c.epochs);
  c.batch_size = j.value("batch_size", c.batch_size);
  c.seed = j.value("seed", c.seed);
  c.variant = parse_variant(j.value("variant", std::string(to_string(c.variant))));
  c.discriminator = parse_discriminator(j.value("discriminator", std::string(to_string(c.discriminator))));
  c.factor_negatives = parse_factor_negatives(j.value("factor_negatives", std::string(to_string(c.factor_negatives))));
  c.negatives_per_positive = j.value("negatives", c.negatives_per_positive);
  c.normalize_adjacency = j.value("normalize_adjacency", c.normalize_adjacency);
  c.bias_inside = j.value("bias_inside", c.bias_inside);
  c.normalize_attention = j.value("normalize_attention", c.normalize_attention);
  c.share_factor_attention = j.value("share_factor_attention", c.share_factor_attention);
  c.dropout_edge = j.value("dropout_edge", c.dropout_edge);
  c.dropout_node = j.value("dropout_node", c.dropout_node);
  c.early_stopping = j.value("early_stopping", c.early_stopping);
  c.patience = j.value("patience", c.patience);
  c.validation_fraction = j.value("validation_fraction", c.validation_fraction);
  return c;
}

}  // namespace dgcl
