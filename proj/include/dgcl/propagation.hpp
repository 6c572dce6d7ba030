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

#include "dgcl/autograd.hpp"
#include "dgcl/graphs.hpp"
#include "dgcl/matrix.hpp"

namespace dgcl {

// Weights of one gated graph channel at width w. The gates read the
// concatenated in/out aggregation, so W_z, W_r and W_h are 2w x w.
template <class T>
struct GgnnWeightsT {
  T w_in, w_out;  // w x w
  T b_in, b_out;  // 1 x w
  T w_z, w_r, w_h;  // 2w x w
  T u_z, u_r, u_h;  // w x w

  template <class F>
  void visit(F&& f) {
    f("w_in", w_in), f("w_out", w_out), f("b_in", b_in), f("b_out", b_out);
    f("w_z", w_z), f("w_r", w_r), f("w_h", w_h);
    f("u_z", u_z), f("u_r", u_r), f("u_h", u_h);
  }
  template <class F>
  auto map(F&& f) {
    return GgnnWeightsT<decltype(f(w_in))>{f(w_in), f(w_out), f(b_in), f(b_out), f(w_z),
                                           f(w_r),  f(w_h),   f(u_z),  f(u_r),   f(u_h)};
  }
  template <class F>
  auto map(F&& f) const {
    return GgnnWeightsT<decltype(f(w_in))>{f(w_in), f(w_out), f(b_in), f(b_out), f(w_z),
                                           f(w_r),  f(w_h),   f(u_z),  f(u_r),   f(u_h)};
  }
};

using GgnnWeights = GgnnWeightsT<Matrix>;
using GgnnVars = GgnnWeightsT<ag::Var>;

GgnnWeights zero_ggnn_weights(std::size_t width);

// One gated update of every node. `x` is n x w; the adjacency matrices are
// n x n with row i holding the weights of node i's incoming (adj_in) or
// outgoing (adj_out) neighbours.
ag::Var ggnn_step(ag::Var x, ag::Var adj_in, ag::Var adj_out, const GgnnVars& w);
Matrix ggnn_step(const Matrix& x, const Matrix& adj_in, const Matrix& adj_out, const GgnnWeights& w);

// `layers` repeated steps over a fixed adjacency.
ag::Var propagate(ag::Var x, ag::Var adj_in, ag::Var adj_out, const GgnnVars& w, std::size_t layers);

// Original view: the session graph over raw item embeddings.
ag::Var run_original(const SessionGraph& graph, ag::Var x0, const GgnnVars& w, std::size_t layers);
Matrix run_original(const SessionGraph& graph, const Matrix& x0, const GgnnWeights& w, std::size_t layers);

// One factor sub-channel over its cosine-weighted adjacency.
ag::Var run_factor(const SessionGraph& graph, ag::Var cosine, ag::Var f0, const GgnnVars& w, std::size_t layers);
Matrix run_factor(const SessionGraph& graph, const FactorAdjacency& adjacency, const Matrix& f0, const GgnnWeights& w,
                  std::size_t layers);

// Star view. `x0` carries the node rows followed by the satellite row; the
// satellite row is dropped from the result.
ag::Var run_star(const StarGraph& star, ag::Var x0_with_satellite, const GgnnVars& w, std::size_t layers);
Matrix run_star(const StarGraph& star, const Matrix& x0_with_satellite, const GgnnWeights& w, std::size_t layers);

}  // namespace dgcl
