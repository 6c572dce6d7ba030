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

#include "dgcl/contrast.hpp"

#include <stdexcept>

namespace dgcl {

ag::Var Discriminator::score(ag::Var a, ag::Var b) const {
  if (form == DiscriminatorForm::kDot) return ag::row_dot(a, b);
  if (!weight.valid()) throw std::invalid_argument("bilinear discriminator without a weight matrix");
  return ag::row_dot(ag::matmul(a, weight), b);
}

std::vector<std::size_t> sample_negatives(std::size_t n, std::size_t per_position, Rng& rng) {
  if (n < 2) throw std::invalid_argument("sample_negatives: need at least two positions");
  std::vector<std::size_t> out;
  out.reserve(n * per_position);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t m = 0; m < per_position; ++m) {
      std::size_t j = rng.below(n - 1);
      if (j >= i) ++j;
      out.push_back(j);
    }
  }
  return out;
}

ag::Var bce_contrast(ag::Var positive_scores, ag::Var negative_scores) {
  const ag::Var pos = ag::mean(ag::log_sigmoid(positive_scores));
  const ag::Var neg = ag::mean(ag::log_sigmoid(ag::scale(negative_scores, -1.0)));
  return ag::scale(ag::add(pos, neg), -1.0);
}

namespace {

std::vector<std::size_t> repeat_positions(std::size_t n, std::size_t per_position) {
  std::vector<std::size_t> out;
  out.reserve(n * per_position);
  for (std::size_t i = 0; i < n; ++i) out.insert(out.end(), per_position, i);
  return out;
}

ag::Var pair_loss(ag::Var anchor, ag::Var positive, ag::Var negative_pool, const Discriminator& disc,
                  std::size_t per_position, Rng& rng) {
  const std::size_t n = anchor.rows();
  const auto negatives = sample_negatives(n, per_position, rng);
  const auto anchors = repeat_positions(n, per_position);
  const ag::Var pos = disc.score(anchor, positive);
  const ag::Var neg = disc.score(ag::gather_rows(anchor, anchors), ag::gather_rows(negative_pool, negatives));
  return bce_contrast(pos, neg);
}

void check_config(const ContrastConfig& cfg) {
  if (cfg.negatives_per_positive == 0) throw std::invalid_argument("contrast: negatives_per_positive must be positive");
}

}  // namespace

std::optional<ag::Var> item_cl_loss(ag::Var original, ag::Var augmented, const Discriminator& disc,
                                    const ContrastConfig& cfg, std::uint64_t seed) {
  check_config(cfg);
  if (!original.value().same_shape(augmented.value())) throw std::invalid_argument("item_cl_loss: view shapes differ");
  if (original.rows() < 2) return std::nullopt;
  Rng rng(seed);
  return pair_loss(original, augmented, augmented, disc, cfg.negatives_per_positive, rng);
}

std::optional<ag::Var> factor_cl_loss(const std::vector<ag::Var>& original_factors,
                                      const std::vector<ag::Var>& augmented_factors, const Discriminator& disc,
                                      const ContrastConfig& cfg, std::uint64_t seed) {
  check_config(cfg);
  if (original_factors.size() != augmented_factors.size() || original_factors.empty()) {
    throw std::invalid_argument("factor_cl_loss: factor counts differ");
  }
  if (original_factors[0].rows() < 2) return std::nullopt;
  Rng rng(seed);
  std::vector<ag::Var> terms;
  for (std::size_t k = 0; k < original_factors.size(); ++k) {
    const ag::Var orig = original_factors[k];
    const ag::Var aug = augmented_factors[k];
    if (!orig.value().same_shape(aug.value())) throw std::invalid_argument("factor_cl_loss: view shapes differ");
    const ag::Var pool = cfg.factor_negatives == FactorNegatives::kWithinView ? orig : aug;
    terms.push_back(pair_loss(orig, aug, pool, disc, cfg.negatives_per_positive, rng));
  }
  return ag::sum(ag::concat_rows(terms));
}

std::vector<ag::Var> factor_view_of_original(ag::Var original, const FactorProjectionVars& proj, bool bias_inside) {
  return project(proj, original, bias_inside);
}

std::vector<Matrix> factor_view_of_original(const Matrix& original, const FactorProjection& proj, bool bias_inside) {
  return project(original, proj, bias_inside);
}

namespace {

Discriminator make_disc(ag::Tape& tape, DiscriminatorForm form, const Matrix& bilinear) {
  Discriminator d{form, {}};
  if (form == DiscriminatorForm::kBilinear) d.weight = tape.constant(bilinear);
  return d;
}

}  // namespace

std::optional<double> item_cl_loss(const Matrix& original, const Matrix& augmented, DiscriminatorForm form,
                                   const Matrix& bilinear, const ContrastConfig& cfg, std::uint64_t seed) {
  ag::Tape tape;
  const auto loss = item_cl_loss(tape.constant(original), tape.constant(augmented), make_disc(tape, form, bilinear), cfg, seed);
  if (!loss) return std::nullopt;
  return loss->scalar();
}

std::optional<double> factor_cl_loss(const std::vector<Matrix>& original_factors,
                                     const std::vector<Matrix>& augmented_factors, DiscriminatorForm form,
                                     const Matrix& bilinear, const ContrastConfig& cfg, std::uint64_t seed) {
  ag::Tape tape;
  std::vector<ag::Var> orig, aug;
  for (const auto& m : original_factors) orig.push_back(tape.constant(m));
  for (const auto& m : augmented_factors) aug.push_back(tape.constant(m));
  const auto loss = factor_cl_loss(orig, aug, make_disc(tape, form, bilinear), cfg, seed);
  if (!loss) return std::nullopt;
  return loss->scalar();
}

double mix(double item_loss, double factor_loss, double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw std::invalid_argument("mix: alpha must lie in [0, 1]");
  return alpha * item_loss + (1.0 - alpha) * factor_loss;
}

ag::Var mix(ag::Var item_loss, ag::Var factor_loss, double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw std::invalid_argument("mix: alpha must lie in [0, 1]");
  return ag::add(ag::scale(item_loss, alpha), ag::scale(factor_loss, 1.0 - alpha));
}

}  // namespace dgcl
