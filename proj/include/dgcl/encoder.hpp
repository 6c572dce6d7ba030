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
#include <vector>

#include "dgcl/autograd.hpp"
#include "dgcl/matrix.hpp"

namespace dgcl {

// Soft-attention session readout at width w:
//   a_i = q^T sigmoid(x_i W1 + x_n W2),  g = sum_i a_i x_i,  s = [x_n, g] W3
template <class T>
struct AttentionWeightsT {
  T q;   // w x 1
  T w1;  // w x w
  T w2;  // w x w
  T w3;  // 2w x w

  template <class F>
  void visit(F&& f) {
    f("q", q), f("w1", w1), f("w2", w2), f("w3", w3);
  }
  template <class F>
  auto map(F&& f) {
    return AttentionWeightsT<decltype(f(q))>{f(q), f(w1), f(w2), f(w3)};
  }
  template <class F>
  auto map(F&& f) const {
    return AttentionWeightsT<decltype(f(q))>{f(q), f(w1), f(w2), f(w3)};
  }
};

using AttentionWeights = AttentionWeightsT<Matrix>;
using AttentionVars = AttentionWeightsT<ag::Var>;

AttentionWeights zero_attention_weights(std::size_t width);

struct AttentionOptions {
  // Softmax-normalise the scores a_i across positions. Off by default:
  // the readout uses the raw scores.
  bool normalize_scores = false;
};

// `positions` holds one embedding row per sequence position; the last row
// is the most recent click. Returns 1 x w.
ag::Var attend(ag::Var positions, const AttentionVars& w, const AttentionOptions& options = {});

// Item-level session embedding from node outputs gathered by `alias`.
ag::Var encode_item_level(ag::Var node_outputs, std::span<const std::size_t> alias, const AttentionVars& w,
                          const AttentionOptions& options = {});
Matrix encode_item_level(const Matrix& node_outputs, std::span<const std::size_t> alias, const AttentionWeights& w,
                         const AttentionOptions& options = {});

// Per-factor readouts concatenated in factor order; width K * d_f.
// `w` holds K weight sets, or a single set shared by every factor.
ag::Var encode_factor_level(const std::vector<ag::Var>& factor_outputs, std::span<const std::size_t> alias,
                            const std::vector<AttentionVars>& w, const AttentionOptions& options = {});
Matrix encode_factor_level(const std::vector<Matrix>& factor_outputs, std::span<const std::size_t> alias,
                           const std::vector<AttentionWeights>& w, const AttentionOptions& options = {});

}  // namespace dgcl
