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
#include "dgcl/dataio.hpp"
#include "dgcl/disentangle.hpp"
#include "dgcl/matrix.hpp"

namespace dgcl {

inline constexpr double kProbabilityEpsilon = 1e-12;

// Per-item probabilities from both heads and their average. Rows are
// sessions; a single session gives 1 x N.
struct ScoreVector {
  Matrix item;
  Matrix factor;    // empty when the factor head is disabled
  Matrix combined;  // (item + factor) / 2, or item alone
};

struct LossBreakdown {
  double prediction = 0.0;   // L_p
  double contrastive = 0.0;  // L_c
  double independence = 0.0; // L_d
  double beta1 = 0.0;
  double beta2 = 0.0;
  double total = 0.0;
};

// Catalog items in factor space, concatenated over factors: N x (K d_f).
ag::Var catalog_factor_embeddings(ag::Var catalog, const FactorProjectionVars& proj, bool bias_inside = false);
Matrix catalog_factor_embeddings(const Matrix& catalog, const FactorProjection& proj, bool bias_inside = false);

struct ScoreVars {
  ag::Var item;
  ag::Var factor;  // invalid when the factor head is disabled
  ag::Var combined;
};

// Softmax over inner products with every catalog item, per head. Passing an
// invalid `session_factor` scores with the item head only.
ScoreVars score(ag::Var session_item, ag::Var session_factor, ag::Var catalog, ag::Var catalog_factor);
ScoreVector score(const Matrix& session_item, const Matrix& session_factor, const Matrix& catalog,
                  const FactorProjection& proj, bool bias_inside = false);
ScoreVector score_item_only(const Matrix& session_item, const Matrix& catalog);

// Binary cross-entropy of every item against the one-hot target, summed
// over items and averaged over rows. Probabilities are clamped to
// [eps, 1] inside both logarithms.
ag::Var prediction_loss(ag::Var probabilities, std::span<const ItemIndex> targets);
double prediction_loss(const Matrix& probabilities, ItemIndex target);

// L_p + beta1 * L_c + beta2 * L_d
LossBreakdown total_loss(double prediction, double contrastive, double independence, double beta1, double beta2);

}  // namespace dgcl
