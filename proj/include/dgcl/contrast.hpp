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
#include <optional>
#include <vector>

#include "dgcl/autograd.hpp"
#include "dgcl/disentangle.hpp"
#include "dgcl/matrix.hpp"
#include "dgcl/random.hpp"

namespace dgcl {

enum class DiscriminatorForm { kDot, kBilinear };

// Where factor-level negatives come from: the re-embedded original view
// itself, or the factor channel's output.
enum class FactorNegatives { kWithinView, kCrossView };

// Bilinear agreement matrices, one per embedding width. Unused for the
// dot form.
template <class T>
struct DiscriminatorT {
  T item;    // d x d
  T factor;  // d_f x d_f

  template <class F>
  void visit(F&& f) {
    f("item", item), f("factor", factor);
  }
  template <class F>
  auto map(F&& f) {
    return DiscriminatorT<decltype(f(item))>{f(item), f(factor)};
  }
};

// Scores the agreement of two equal-width embeddings.
struct Discriminator {
  DiscriminatorForm form = DiscriminatorForm::kDot;
  ag::Var weight;  // required for kBilinear

  // Row-wise scores H(a_i, b_i) as an m x 1 column.
  ag::Var score(ag::Var a, ag::Var b) const;
};

struct ContrastConfig {
  double alpha = 0.5;
  std::size_t negatives_per_positive = 1;
  FactorNegatives factor_negatives = FactorNegatives::kWithinView;
};

// For each position i, `per_position` indices drawn uniformly from
// {0..n-1} \ {i}; position-major order. Requires n >= 2.
std::vector<std::size_t> sample_negatives(std::size_t n, std::size_t per_position, Rng& rng);

// -mean log sigmoid(pos) - mean log sigmoid(1 - neg).
ag::Var bce_contrast(ag::Var positive_scores, ag::Var negative_scores);

// Item-level term: positives pair row i of both views, negatives pair row
// i of `original` with row j != i of `augmented`. nullopt for a single
// node, which has no valid negative.
std::optional<ag::Var> item_cl_loss(ag::Var original, ag::Var augmented, const Discriminator& disc,
                                    const ContrastConfig& cfg, std::uint64_t seed);

// Factor-level term summed over factors. Positives pair the re-embedded
// original view with the factor channel output; negatives follow
// cfg.factor_negatives.
std::optional<ag::Var> factor_cl_loss(const std::vector<ag::Var>& original_factors,
                                      const std::vector<ag::Var>& augmented_factors, const Discriminator& disc,
                                      const ContrastConfig& cfg, std::uint64_t seed);

// The original view's updated embeddings in each factor space, through the
// same projection as the raw item embeddings.
std::vector<ag::Var> factor_view_of_original(ag::Var original, const FactorProjectionVars& proj, bool bias_inside = false);
std::vector<Matrix> factor_view_of_original(const Matrix& original, const FactorProjection& proj, bool bias_inside = false);

// Plain-matrix conveniences; `bilinear` is ignored for the dot form.
std::optional<double> item_cl_loss(const Matrix& original, const Matrix& augmented, DiscriminatorForm form,
                                   const Matrix& bilinear, const ContrastConfig& cfg, std::uint64_t seed);
std::optional<double> factor_cl_loss(const std::vector<Matrix>& original_factors,
                                     const std::vector<Matrix>& augmented_factors, DiscriminatorForm form,
                                     const Matrix& bilinear, const ContrastConfig& cfg, std::uint64_t seed);

// alpha * item + (1 - alpha) * factor
double mix(double item_loss, double factor_loss, double alpha);
ag::Var mix(ag::Var item_loss, ag::Var factor_loss, double alpha);

}  // namespace dgcl
