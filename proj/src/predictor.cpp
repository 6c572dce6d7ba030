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

#include "dgcl/predictor.hpp"

#include <stdexcept>

namespace dgcl {

ag::Var catalog_factor_embeddings(ag::Var catalog, const FactorProjectionVars& proj, bool bias_inside) {
  return ag::concat_cols(project(proj, catalog, bias_inside));
}

Matrix catalog_factor_embeddings(const Matrix& catalog, const FactorProjection& proj, bool bias_inside) {
  ag::Tape tape;
  const auto vars = proj.map([&](const Matrix& m) { return tape.constant(m); });
  return catalog_factor_embeddings(tape.constant(catalog), vars, bias_inside).value();
}

ScoreVars score(ag::Var session_item, ag::Var session_factor, ag::Var catalog, ag::Var catalog_factor) {
  if (catalog.rows() == 0) throw std::invalid_argument("score: empty catalog");
  ScoreVars out;
  out.item = ag::softmax_rows(ag::matmul_nt(session_item, catalog));
  if (!session_factor.valid()) {
    out.combined = out.item;
    return out;
  }
  if (catalog_factor.rows() != catalog.rows()) throw std::invalid_argument("score: factor catalog size differs");
  out.factor = ag::softmax_rows(ag::matmul_nt(session_factor, catalog_factor));
  out.combined = ag::scale(ag::add(out.item, out.factor), 0.5);
  return out;
}

ScoreVector score(const Matrix& session_item, const Matrix& session_factor, const Matrix& catalog,
                  const FactorProjection& proj, bool bias_inside) {
  ag::Tape tape;
  const Matrix cf = catalog_factor_embeddings(catalog, proj, bias_inside);
  const auto s = score(tape.constant(session_item), tape.constant(session_factor), tape.constant(catalog), tape.constant(cf));
  return ScoreVector{s.item.value(), s.factor.value(), s.combined.value()};
}

ScoreVector score_item_only(const Matrix& session_item, const Matrix& catalog) {
  ag::Tape tape;
  const auto s = score(tape.constant(session_item), ag::Var{}, tape.constant(catalog), ag::Var{});
  return ScoreVector{s.item.value(), Matrix(), s.combined.value()};
}

ag::Var prediction_loss(ag::Var probabilities, std::span<const ItemIndex> targets) {
  const std::size_t rows = probabilities.rows();
  const std::size_t n = probabilities.cols();
  if (targets.size() != rows) throw std::invalid_argument("prediction_loss: one target per row required");
  ag::Tape& t = *probabilities.tape();
  Matrix onehot(rows, n);
  Matrix offhot(rows, n, 1.0);
  for (std::size_t r = 0; r < rows; ++r) {
    if (targets[r] >= n) throw std::out_of_range("prediction_loss: target outside catalog");
    onehot(r, targets[r]) = 1.0;
    offhot(r, targets[r]) = 0.0;
  }
  const ag::Var log_p = ag::log_clamped(probabilities, kProbabilityEpsilon);
  const ag::Var log_q = ag::log_clamped(ag::add_scalar(ag::scale(probabilities, -1.0), 1.0), kProbabilityEpsilon);
  const ag::Var terms = ag::add(ag::hadamard(t.constant(std::move(onehot)), log_p), ag::hadamard(t.constant(std::move(offhot)), log_q));
  return ag::scale(ag::sum(terms), -1.0 / static_cast<double>(rows));
}

double prediction_loss(const Matrix& probabilities, ItemIndex target) {
  ag::Tape tape;
  const ItemIndex targets[] = {target};
  return prediction_loss(tape.constant(probabilities), targets).scalar();
}

LossBreakdown total_loss(double prediction, double contrastive, double independence, double beta1, double beta2) {
  if (beta1 < 0.0 || beta2 < 0.0) throw std::invalid_argument("total_loss: weights must be non-negative");
  return LossBreakdown{prediction, contrastive, independence, beta1, beta2,
                       prediction + beta1 * contrastive + beta2 * independence};
}

}  // namespace dgcl
