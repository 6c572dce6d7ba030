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
#include <functional>
#include <span>
#include <vector>

#include "dgcl/matrix.hpp"

namespace dgcl {

// A trainable tensor together with its accumulated gradient.
struct Parameter {
  Matrix value;
  Matrix grad;

  Parameter() = default;
  explicit Parameter(Matrix v) : value(std::move(v)), grad(value.rows(), value.cols()) {}
  void zero_grad() {
    if (!grad.same_shape(value)) grad = Matrix(value.rows(), value.cols());
    grad.fill(0.0);
  }
};

namespace ag {

class Tape;

// Handle to a node on a Tape. Cheap to copy; valid as long as the tape.
class Var {
 public:
  Var() = default;
  const Matrix& value() const;
  // Gradient accumulated by the last Tape::backward; zero-shaped if none.
  const Matrix& grad() const;
  std::size_t rows() const { return value().rows(); }
  std::size_t cols() const { return value().cols(); }
  double scalar() const { return value()[0]; }
  Tape* tape() const { return tape_; }
  std::size_t id() const { return id_; }
  bool valid() const { return tape_ != nullptr; }

 private:
  friend class Tape;
  Var(Tape* tape, std::size_t id) : tape_(tape), id_(id) {}
  Tape* tape_ = nullptr;
  std::size_t id_ = 0;
};

// Reverse-mode recording of matrix operations. Nodes are stored in creation
// order, which is already a topological order, so backward is a single
// reverse sweep.
class Tape {
 public:
  using Backward = std::function<void(Tape&, std::size_t self)>;

  Tape() = default;
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  // Untracked input.
  Var constant(Matrix value);
  // Tracked leaf owned by the tape; read its gradient through Var::grad.
  Var variable(Matrix value);
  // Tracked leaf backed by external storage. backward() adds the node
  // gradient into p.grad. `p` must outlive the tape.
  Var parameter(Parameter& p);

  // Seeds d(root)/d(root) = 1 and propagates. Clears node gradients left
  // by a previous call first, so several losses can be differentiated
  // from one recording. Parameter gradients accumulate.
  void backward(Var root);

  std::size_t size() const { return nodes_.size(); }

  // Interface for operation implementations.
  Var push(Matrix value, bool requires_grad, Backward backward);
  const Matrix& value(std::size_t id) const;
  const Matrix& grad(std::size_t id) const { return nodes_[id].grad; }
  bool requires_grad(std::size_t id) const { return nodes_[id].requires_grad; }
  // Gradient buffer for `id`, allocated as zeros on first use.
  Matrix& grad_mut(std::size_t id);

 private:
  struct Node {
    Matrix owned;
    const Matrix* external = nullptr;
    Parameter* param = nullptr;
    Matrix grad;
    bool requires_grad = false;
    Backward backward;
  };
  std::vector<Node> nodes_;
};

// Operations. Shapes follow the row-vector convention: a batch of n
// embeddings of width d is an n x d matrix.

Var matmul(Var a, Var b);
Var matmul_nt(Var a, Var b);  // a * b^T
Var transpose(Var a);
Var add(Var a, Var b);
Var sub(Var a, Var b);
Var hadamard(Var a, Var b);
Var scale(Var a, double c);
Var add_scalar(Var a, double c);
// Adds a 1 x cols row to every row of `a`.
Var add_row(Var a, Var row);
// Multiplies every entry of `a` by the 1x1 value `s`.
Var scale_by(Var a, Var s);
Var sigmoid(Var a);
Var tanh(Var a);
Var log_sigmoid(Var a);
// log(max(a, eps)); gradient is zero where clamped.
Var log_clamped(Var a, double eps);
Var concat_cols(std::span<const Var> parts);
Var concat_rows(std::span<const Var> parts);
Var slice_rows(Var a, std::size_t begin, std::size_t count);
Var gather_rows(Var a, std::span<const std::size_t> index);
Var mean_rows(Var a);  // 1 x cols
Var sum(Var a);        // 1 x 1
Var mean(Var a);       // 1 x 1
Var row_dot(Var a, Var b);  // m x 1, row-wise inner products
Var softmax_rows(Var a);
// Entry (i, j) is the cosine similarity of rows i and j of `x` where
// mask(i, j) != 0, and 0 elsewhere. A zero-norm row yields 0.
Var masked_row_cosine(Var x, const Matrix& mask);
// Euclidean distances between all row pairs; m x m with zero diagonal.
Var pairwise_distances(Var x);
// D - row means - column means + grand mean.
Var double_center(Var d);
// sqrt(cov2 / sqrt(var_x2 * var_y2)) on 1x1 inputs; 0 when either
// variance or the covariance is non-positive.
Var dcor_ratio(Var cov2, Var var_x2, Var var_y2);

}  // namespace ag
}  // namespace dgcl
