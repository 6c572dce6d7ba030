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

#include "dgcl/propagation.hpp"

#include <array>
#include <stdexcept>

namespace dgcl {

GgnnWeights zero_ggnn_weights(std::size_t width) {
  const std::size_t w = width;
  return GgnnWeights{Matrix(w, w),     Matrix(w, w),     Matrix(1, w), Matrix(1, w), Matrix(2 * w, w),
                     Matrix(2 * w, w), Matrix(2 * w, w), Matrix(w, w), Matrix(w, w), Matrix(w, w)};
}

namespace {

GgnnVars constants(ag::Tape& tape, const GgnnWeights& w) {
  return w.map([&](const Matrix& m) { return tape.constant(m); });
}

void check_dims(ag::Var x, ag::Var adj_in, ag::Var adj_out, const GgnnVars& w) {
  const std::size_t n = x.rows();
  const std::size_t width = x.cols();
  require_shape(adj_in.value(), n, n, "ggnn adj_in");
  require_shape(adj_out.value(), n, n, "ggnn adj_out");
  require_shape(w.w_in.value(), width, width, "ggnn w_in");
  require_shape(w.w_out.value(), width, width, "ggnn w_out");
  require_shape(w.w_z.value(), 2 * width, width, "ggnn w_z");
}

}  // namespace

ag::Var ggnn_step(ag::Var x, ag::Var adj_in, ag::Var adj_out, const GgnnVars& w) {
  check_dims(x, adj_in, adj_out, w);
  const ag::Var msg_in = ag::add_row(ag::matmul(adj_in, ag::matmul(x, w.w_in)), w.b_in);
  const ag::Var msg_out = ag::add_row(ag::matmul(adj_out, ag::matmul(x, w.w_out)), w.b_out);
  const std::array<ag::Var, 2> parts{msg_in, msg_out};
  const ag::Var c = ag::concat_cols(parts);

  const ag::Var z = ag::sigmoid(ag::add(ag::matmul(c, w.w_z), ag::matmul(x, w.u_z)));
  const ag::Var r = ag::sigmoid(ag::add(ag::matmul(c, w.w_r), ag::matmul(x, w.u_r)));
  const ag::Var candidate = ag::tanh(ag::add(ag::matmul(c, w.w_h), ag::matmul(ag::hadamard(r, x), w.u_h)));
  const ag::Var keep = ag::add_scalar(ag::scale(z, -1.0), 1.0);
  return ag::add(ag::hadamard(keep, x), ag::hadamard(z, candidate));
}

Matrix ggnn_step(const Matrix& x, const Matrix& adj_in, const Matrix& adj_out, const GgnnWeights& w) {
  ag::Tape tape;
  return ggnn_step(tape.constant(x), tape.constant(adj_in), tape.constant(adj_out), constants(tape, w)).value();
}

ag::Var propagate(ag::Var x, ag::Var adj_in, ag::Var adj_out, const GgnnVars& w, std::size_t layers) {
  for (std::size_t l = 0; l < layers; ++l) x = ggnn_step(x, adj_in, adj_out, w);
  return x;
}

ag::Var run_original(const SessionGraph& graph, ag::Var x0, const GgnnVars& w, std::size_t layers) {
  ag::Tape& t = *x0.tape();
  return propagate(x0, t.constant(graph.adj_in), t.constant(graph.adj_out), w, layers);
}

Matrix run_original(const SessionGraph& graph, const Matrix& x0, const GgnnWeights& w, std::size_t layers) {
  ag::Tape tape;
  return run_original(graph, tape.constant(x0), constants(tape, w), layers).value();
}

ag::Var run_factor(const SessionGraph& graph, ag::Var cosine, ag::Var f0, const GgnnVars& w, std::size_t layers) {
  const auto adj = factor_channel_adjacency(graph, cosine);
  return propagate(f0, adj.adj_in, adj.adj_out, w, layers);
}

Matrix run_factor(const SessionGraph& graph, const FactorAdjacency& adjacency, const Matrix& f0, const GgnnWeights& w,
                  std::size_t layers) {
  ag::Tape tape;
  return run_factor(graph, tape.constant(adjacency.weights), tape.constant(f0), constants(tape, w), layers).value();
}

ag::Var run_star(const StarGraph& star, ag::Var x0_with_satellite, const GgnnVars& w, std::size_t layers) {
  const std::size_t n = star.base.node_count();
  if (x0_with_satellite.rows() != n + 1) throw std::invalid_argument("run_star: expected node rows plus one satellite row");
  ag::Tape& t = *x0_with_satellite.tape();
  const ag::Var out = propagate(x0_with_satellite, t.constant(star.adj_in), t.constant(star.adj_out), w, layers);
  return ag::slice_rows(out, 0, n);
}

Matrix run_star(const StarGraph& star, const Matrix& x0_with_satellite, const GgnnWeights& w, std::size_t layers) {
  ag::Tape tape;
  return run_star(star, tape.constant(x0_with_satellite), constants(tape, w), layers).value();
}

}  // namespace dgcl
