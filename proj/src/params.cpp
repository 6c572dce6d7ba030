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

#include "dgcl/params.hpp"

#include <cmath>

#include "dgcl/random.hpp"

namespace dgcl {

namespace {

template <class S>
void visit_struct(S& s, const std::string& channel, const ParameterSet::Visitor& f) {
  s.visit([&](const char* name, Parameter& p) { f(channel, name, p); });
}

}  // namespace

void ParameterSet::for_each(const Visitor& f, bool with_discriminator) {
  f("embedding", "table", embedding);
  for (std::size_t k = 0; k < projection.factors(); ++k) {
    f("projection", "weight" + std::to_string(k), projection.weights[k]);
    f("projection", "bias" + std::to_string(k), projection.biases[k]);
  }
  visit_struct(original, "original", f);
  for (std::size_t k = 0; k < factor.size(); ++k) visit_struct(factor[k], "factor" + std::to_string(k), f);
  visit_struct(star, "star", f);
  visit_struct(item_attention, "attention_item", f);
  for (std::size_t k = 0; k < factor_attention.size(); ++k)
    visit_struct(factor_attention[k], "attention_factor" + std::to_string(k), f);
  if (with_discriminator) visit_struct(discriminator, "discriminator", f);
}

void ParameterSet::zero_grad(bool with_discriminator) {
  for_each([](const std::string&, const std::string&, Parameter& p) { p.zero_grad(); }, with_discriminator);
}

namespace {

template <class S>
auto as_parameters(const S& s) {
  return s.map([](const Matrix& m) { return Parameter(m); });
}

}  // namespace

ParameterSet zero_parameters(const TrainConfig& cfg, std::size_t num_items) {
  cfg.validate();
  const std::size_t d = cfg.d;
  const std::size_t df = cfg.factor_dim();
  ParameterSet p;
  p.embedding = Parameter(Matrix(num_items, d));
  p.projection = as_parameters(zero_projection(d, cfg.factors));
  p.original = as_parameters(zero_ggnn_weights(d));
  for (std::size_t k = 0; k < cfg.factors; ++k) p.factor.push_back(as_parameters(zero_ggnn_weights(df)));
  p.star = as_parameters(zero_ggnn_weights(d));
  p.item_attention = as_parameters(zero_attention_weights(d));
  const std::size_t attention_sets = cfg.share_factor_attention ? 1 : cfg.factors;
  for (std::size_t k = 0; k < attention_sets; ++k) p.factor_attention.push_back(as_parameters(zero_attention_weights(df)));
  p.discriminator.item = Parameter(Matrix(d, d));
  p.discriminator.factor = Parameter(Matrix(df, df));
  return p;
}

ParameterSet init_parameters(const TrainConfig& cfg, std::size_t num_items, std::uint64_t seed) {
  ParameterSet p = zero_parameters(cfg, num_items);
  const double bound = 1.0 / std::sqrt(static_cast<double>(cfg.d));
  p.for_each(
      [&](const std::string& channel, const std::string& name, Parameter& param) {
        Rng rng(derive_seed(seed, Stream::kInit, hash_name(channel + "/" + name)));
        for (double& v : param.value.flat()) v = rng.uniform(-bound, bound);
      },
      false);
  p.discriminator.item.value = Matrix::identity(cfg.d);
  p.discriminator.factor.value = Matrix::identity(cfg.factor_dim());
  p.zero_grad();
  return p;
}

BoundParameters bind(ag::Tape& tape, ParameterSet& params, DiscriminatorForm form) {
  auto leaf = [&](Parameter& p) { return tape.parameter(p); };
  BoundParameters b;
  b.embedding = tape.parameter(params.embedding);
  b.projection = params.projection.map(leaf);
  b.original = params.original.map(leaf);
  for (auto& f : params.factor) b.factor.push_back(f.map(leaf));
  b.star = params.star.map(leaf);
  b.item_attention = params.item_attention.map(leaf);
  for (auto& a : params.factor_attention) b.factor_attention.push_back(a.map(leaf));
  b.item_disc.form = form;
  b.factor_disc.form = form;
  if (form == DiscriminatorForm::kBilinear) {
    b.item_disc.weight = tape.parameter(params.discriminator.item);
    b.factor_disc.weight = tape.parameter(params.discriminator.factor);
  }
  return b;
}

}  // namespace dgcl
