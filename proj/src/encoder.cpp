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

#include "dgcl/encoder.hpp"

#include <array>
#include <stdexcept>

namespace dgcl {

AttentionWeights zero_attention_weights(std::size_t width) {
  return AttentionWeights{Matrix(width, 1), Matrix(width, width), Matrix(width, width), Matrix(2 * width, width)};
}

ag::Var attend(ag::Var positions, const AttentionVars& w, const AttentionOptions& options) {
  const std::size_t n = positions.rows();
  if (n == 0) throw std::invalid_argument("attend: empty session");
  require_shape(w.q.value(), positions.cols(), 1, "attention q");
  const ag::Var last = ag::slice_rows(positions, n - 1, 1);
  const ag::Var hidden = ag::sigmoid(ag::add_row(ag::matmul(positions, w.w1), ag::matmul(last, w.w2)));
  ag::Var scores = ag::transpose(ag::matmul(hidden, w.q));  // 1 x n
  if (options.normalize_scores) scores = ag::softmax_rows(scores);
  const ag::Var global = ag::matmul(scores, positions);
  const std::array<ag::Var, 2> parts{last, global};
  return ag::matmul(ag::concat_cols(parts), w.w3);
}

ag::Var encode_item_level(ag::Var node_outputs, std::span<const std::size_t> alias, const AttentionVars& w,
                          const AttentionOptions& options) {
  if (alias.empty()) throw std::invalid_argument("encode: empty session");
  return attend(ag::gather_rows(node_outputs, alias), w, options);
}

Matrix encode_item_level(const Matrix& node_outputs, std::span<const std::size_t> alias, const AttentionWeights& w,
                         const AttentionOptions& options) {
  ag::Tape tape;
  const auto vars = w.map([&](const Matrix& m) { return tape.constant(m); });
  return encode_item_level(tape.constant(node_outputs), alias, vars, options).value();
}

ag::Var encode_factor_level(const std::vector<ag::Var>& factor_outputs, std::span<const std::size_t> alias,
                            const std::vector<AttentionVars>& w, const AttentionOptions& options) {
  if (factor_outputs.empty()) throw std::invalid_argument("encode_factor_level: no factors");
  if (w.size() != 1 && w.size() != factor_outputs.size()) {
    throw std::invalid_argument("encode_factor_level: need one attention set per factor or a single shared set");
  }
  std::vector<ag::Var> parts;
  for (std::size_t k = 0; k < factor_outputs.size(); ++k)
    parts.push_back(encode_item_level(factor_outputs[k], alias, w.size() == 1 ? w[0] : w[k], options));
  return ag::concat_cols(parts);
}

Matrix encode_factor_level(const std::vector<Matrix>& factor_outputs, std::span<const std::size_t> alias,
                           const std::vector<AttentionWeights>& w, const AttentionOptions& options) {
  ag::Tape tape;
  std::vector<ag::Var> outs;
  for (const auto& m : factor_outputs) outs.push_back(tape.constant(m));
  std::vector<AttentionVars> vars;
  for (const auto& a : w) vars.push_back(a.map([&](const Matrix& m) { return tape.constant(m); }));
  return encode_factor_level(outs, alias, vars, options).value();
}

}  // namespace dgcl
