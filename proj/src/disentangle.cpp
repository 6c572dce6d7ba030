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

#include "dgcl/disentangle.hpp"

#include <stdexcept>

namespace dgcl {

std::size_t factor_dim(std::size_t d, std::size_t factors) {
  if (factors == 0) throw std::invalid_argument("factor count must be positive");
  const std::size_t df = d / factors;
  if (df == 0) throw std::invalid_argument("embedding width smaller than factor count");
  return df;
}

FactorProjection zero_projection(std::size_t d, std::size_t factors) {
  const std::size_t df = factor_dim(d, factors);
  FactorProjection p;
  for (std::size_t k = 0; k < factors; ++k) {
    p.weights.emplace_back(d, df);
    p.biases.emplace_back(1, df);
  }
  return p;
}

std::vector<ag::Var> project(const FactorProjectionVars& proj, ag::Var items, bool bias_inside) {
  std::vector<ag::Var> out;
  out.reserve(proj.factors());
  for (std::size_t k = 0; k < proj.factors(); ++k) {
    if (items.cols() != proj.weights[k].rows()) {
      throw std::invalid_argument("project: item width " + std::to_string(items.cols()) + " does not match projection input " +
                                  std::to_string(proj.weights[k].rows()));
    }
    const ag::Var linear = ag::matmul(items, proj.weights[k]);
    out.push_back(bias_inside ? ag::sigmoid(ag::add_row(linear, proj.biases[k]))
                              : ag::add_row(ag::sigmoid(linear), proj.biases[k]));
  }
  return out;
}

std::vector<Matrix> project(const Matrix& items, const FactorProjection& proj, bool bias_inside) {
  ag::Tape tape;
  const auto vars = proj.map([&](const Matrix& m) { return tape.constant(m); });
  std::vector<Matrix> out;
  for (const auto& v : project(vars, tape.constant(items), bias_inside)) out.push_back(v.value());
  return out;
}

namespace {

ag::Var centered_distances(ag::Var x) { return ag::double_center(ag::pairwise_distances(x)); }

ag::Var dcor_from_centered(ag::Var a, ag::Var b) {
  const ag::Var cov2 = ag::mean(ag::hadamard(a, b));
  const ag::Var vx = ag::mean(ag::hadamard(a, a));
  const ag::Var vy = ag::mean(ag::hadamard(b, b));
  return ag::dcor_ratio(cov2, vx, vy);
}

}  // namespace

ag::Var dcor(ag::Var x, ag::Var y) {
  if (x.rows() != y.rows()) throw std::invalid_argument("dcor: sample counts differ");
  if (x.rows() < 2) throw std::invalid_argument("dcor: need at least two samples");
  return dcor_from_centered(centered_distances(x), centered_distances(y));
}

double dcor(const Matrix& x, const Matrix& y) {
  ag::Tape tape;
  return dcor(tape.constant(x), tape.constant(y)).scalar();
}

ag::Var independence_loss(ag::Tape& tape, const std::vector<ag::Var>& factors) {
  if (factors.size() < 2 || factors[0].rows() < 2) return tape.constant(Matrix(1, 1));
  std::vector<ag::Var> centered;
  for (const auto& f : factors) centered.push_back(centered_distances(f));
  std::vector<ag::Var> terms;
  for (std::size_t k = 0; k < centered.size(); ++k)
    for (std::size_t t = k + 1; t < centered.size(); ++t) terms.push_back(dcor_from_centered(centered[k], centered[t]));
  // dcor is symmetric, so each unordered pair stands for the two ordered ones.
  return ag::scale(ag::sum(ag::concat_rows(terms)), 2.0);
}

double independence_loss(const std::vector<Matrix>& factors) {
  ag::Tape tape;
  std::vector<ag::Var> vars;
  for (const auto& f : factors) vars.push_back(tape.constant(f));
  return independence_loss(tape, vars).scalar();
}

}  // namespace dgcl
