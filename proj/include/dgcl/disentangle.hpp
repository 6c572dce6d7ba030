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
#include <vector>

#include "dgcl/autograd.hpp"
#include "dgcl/matrix.hpp"

namespace dgcl {

// Per-factor projections f^k = sigmoid(e W^k) + b^k of item embeddings
// into K factor spaces of width floor(d / K).
template <class T>
struct FactorProjectionT {
  std::vector<T> weights;  // K of d x d_f
  std::vector<T> biases;   // K of 1 x d_f

  std::size_t factors() const { return weights.size(); }

  template <class F>
  auto map(F&& f) {
    FactorProjectionT<decltype(f(weights[0]))> out;
    for (auto& w : weights) out.weights.push_back(f(w));
    for (auto& b : biases) out.biases.push_back(f(b));
    return out;
  }
  template <class F>
  auto map(F&& f) const {
    FactorProjectionT<decltype(f(weights[0]))> out;
    for (const auto& w : weights) out.weights.push_back(f(w));
    for (const auto& b : biases) out.biases.push_back(f(b));
    return out;
  }
};

using FactorProjection = FactorProjectionT<Matrix>;
using FactorProjectionVars = FactorProjectionT<ag::Var>;

std::size_t factor_dim(std::size_t d, std::size_t factors);

// All-zero projection of the given shape.
FactorProjection zero_projection(std::size_t d, std::size_t factors);

// `bias_inside` computes sigmoid(e W + b) instead.
std::vector<ag::Var> project(const FactorProjectionVars& proj, ag::Var items, bool bias_inside = false);
std::vector<Matrix> project(const Matrix& items, const FactorProjection& proj, bool bias_inside = false);

// Distance correlation of two samples with the same number of rows, using
// double-centred Euclidean distance matrices. Zero when either side has
// zero distance variance.
double dcor(const Matrix& x, const Matrix& y);
ag::Var dcor(ag::Var x, ag::Var y);

// Sum of dcor over ordered factor pairs (k, t), k != t. Zero for K = 1 or
// fewer than two samples.
double independence_loss(const std::vector<Matrix>& factors);
ag::Var independence_loss(ag::Tape& tape, const std::vector<ag::Var>& factors);

}  // namespace dgcl
