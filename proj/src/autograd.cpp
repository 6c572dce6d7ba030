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

#include "dgcl/autograd.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "dgcl/kernels.hpp"

namespace dgcl::ag {

const Matrix& Var::value() const { return tape_->value(id_); }
const Matrix& Var::grad() const { return tape_->grad(id_); }

Var Tape::constant(Matrix value) { return push(std::move(value), false, nullptr); }

Var Tape::variable(Matrix value) { return push(std::move(value), true, nullptr); }

Var Tape::parameter(Parameter& p) {
  Node node;
  node.external = &p.value;
  node.param = &p;
  node.requires_grad = true;
  nodes_.push_back(std::move(node));
  return Var(this, nodes_.size() - 1);
}

Var Tape::push(Matrix value, bool requires_grad, Backward backward) {
  Node node;
  node.owned = std::move(value);
  node.requires_grad = requires_grad;
  if (requires_grad) node.backward = std::move(backward);
  nodes_.push_back(std::move(node));
  return Var(this, nodes_.size() - 1);
}

const Matrix& Tape::value(std::size_t id) const {
  const Node& n = nodes_[id];
  return n.external != nullptr ? *n.external : n.owned;
}

Matrix& Tape::grad_mut(std::size_t id) {
  Node& n = nodes_[id];
  if (n.grad.empty()) {
    const Matrix& v = value(id);
    n.grad = Matrix(v.rows(), v.cols());
  }
  return n.grad;
}

void Tape::backward(Var root) {
  if (root.tape_ != this) throw std::invalid_argument("Tape::backward: variable from another tape");
  if (root.value().size() != 1) throw std::invalid_argument("Tape::backward: root must be a scalar");
  for (auto& n : nodes_) n.grad = Matrix();
  if (!nodes_[root.id_].requires_grad) return;
  grad_mut(root.id_)[0] = 1.0;
  for (std::size_t id = root.id_ + 1; id-- > 0;) {
    Node& n = nodes_[id];
    if (n.grad.empty()) continue;
    if (n.backward) n.backward(*this, id);
  }
  for (auto& n : nodes_) {
    if (n.param == nullptr || n.grad.empty()) continue;
    if (!n.param->grad.same_shape(n.param->value)) n.param->zero_grad();
    kernels::add(n.param->grad.data(), n.grad.data(), n.param->grad.data(), n.grad.size());
  }
}

namespace {

Tape& tape_of(Var a) {
  if (!a.valid()) throw std::invalid_argument("autograd: uninitialised variable");
  return *a.tape();
}

Tape& tape_of(Var a, Var b) {
  if (a.tape() != b.tape()) throw std::invalid_argument("autograd: variables from different tapes");
  return tape_of(a);
}

void accumulate(Tape& t, Var target, const Matrix& delta) {
  if (!t.requires_grad(target.id())) return;
  Matrix& g = t.grad_mut(target.id());
  kernels::add(g.data(), delta.data(), g.data(), g.size());
}

void check_same(const Matrix& a, const Matrix& b, const char* op) {
  if (!a.same_shape(b)) {
    throw std::invalid_argument(std::string(op) + ": shape mismatch " + std::to_string(a.rows()) + "x" +
                                std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) + "x" +
                                std::to_string(b.cols()));
  }
}

template <class F>
Matrix map(const Matrix& a, F f) {
  Matrix out(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = f(a[i]);
  return out;
}

double logistic(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

}  // namespace

Var matmul(Var a, Var b) {
  Tape& t = tape_of(a, b);
  Matrix out = dgcl::matmul(a.value(), b.value());
  const bool rg = t.requires_grad(a.id()) || t.requires_grad(b.id());
  return t.push(std::move(out), rg, [a, b](Tape& t, std::size_t self) {
    const Matrix& g = t.grad(self);
    if (t.requires_grad(a.id())) accumulate(t, a, dgcl::matmul_nt(g, b.value()));
    if (t.requires_grad(b.id())) accumulate(t, b, dgcl::matmul_tn(a.value(), g));
  });
}

Var matmul_nt(Var a, Var b) {
  Tape& t = tape_of(a, b);
  Matrix out = dgcl::matmul_nt(a.value(), b.value());
  const bool rg = t.requires_grad(a.id()) || t.requires_grad(b.id());
  return t.push(std::move(out), rg, [a, b](Tape& t, std::size_t self) {
    const Matrix& g = t.grad(self);
    if (t.requires_grad(a.id())) accumulate(t, a, dgcl::matmul(g, b.value()));
    if (t.requires_grad(b.id())) accumulate(t, b, dgcl::matmul_tn(g, a.value()));
  });
}

Var transpose(Var a) {
  Tape& t = tape_of(a);
  return t.push(dgcl::transpose(a.value()), t.requires_grad(a.id()),
                [a](Tape& t, std::size_t self) { accumulate(t, a, dgcl::transpose(t.grad(self))); });
}

Var add(Var a, Var b) {
  Tape& t = tape_of(a, b);
  check_same(a.value(), b.value(), "add");
  Matrix out(a.rows(), a.cols());
  kernels::add(a.value().data(), b.value().data(), out.data(), out.size());
  const bool rg = t.requires_grad(a.id()) || t.requires_grad(b.id());
  return t.push(std::move(out), rg, [a, b](Tape& t, std::size_t self) {
    const Matrix g = t.grad(self);
    accumulate(t, a, g);
    accumulate(t, b, g);
  });
}

Var sub(Var a, Var b) {
  Tape& t = tape_of(a, b);
  check_same(a.value(), b.value(), "sub");
  Matrix out(a.rows(), a.cols());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a.value()[i] - b.value()[i];
  const bool rg = t.requires_grad(a.id()) || t.requires_grad(b.id());
  return t.push(std::move(out), rg, [a, b](Tape& t, std::size_t self) {
    const Matrix g = t.grad(self);
    accumulate(t, a, g);
    accumulate(t, b, map(g, [](double x) { return -x; }));
  });
}

Var hadamard(Var a, Var b) {
  Tape& t = tape_of(a, b);
  check_same(a.value(), b.value(), "hadamard");
  Matrix out(a.rows(), a.cols());
  kernels::mul(a.value().data(), b.value().data(), out.data(), out.size());
  const bool rg = t.requires_grad(a.id()) || t.requires_grad(b.id());
  return t.push(std::move(out), rg, [a, b](Tape& t, std::size_t self) {
    const Matrix& g = t.grad(self);
    Matrix d(g.rows(), g.cols());
    if (t.requires_grad(a.id())) {
      kernels::mul(g.data(), b.value().data(), d.data(), d.size());
      accumulate(t, a, d);
    }
    if (t.requires_grad(b.id())) {
      kernels::mul(g.data(), a.value().data(), d.data(), d.size());
      accumulate(t, b, d);
    }
  });
}

Var scale(Var a, double c) {
  Tape& t = tape_of(a);
  return t.push(map(a.value(), [c](double x) { return c * x; }), t.requires_grad(a.id()),
                [a, c](Tape& t, std::size_t self) { accumulate(t, a, map(t.grad(self), [c](double x) { return c * x; })); });
}

Var add_scalar(Var a, double c) {
  Tape& t = tape_of(a);
  return t.push(map(a.value(), [c](double x) { return x + c; }), t.requires_grad(a.id()),
                [a](Tape& t, std::size_t self) { accumulate(t, a, t.grad(self)); });
}

Var add_row(Var a, Var row) {
  Tape& t = tape_of(a, row);
  require_shape(row.value(), 1, a.cols(), "add_row");
  Matrix out(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    kernels::add(a.value().row(i).data(), row.value().data(), out.row(i).data(), a.cols());
  const bool rg = t.requires_grad(a.id()) || t.requires_grad(row.id());
  return t.push(std::move(out), rg, [a, row](Tape& t, std::size_t self) {
    const Matrix& g = t.grad(self);
    accumulate(t, a, g);
    if (t.requires_grad(row.id())) {
      Matrix r(1, g.cols());
      for (std::size_t i = 0; i < g.rows(); ++i) kernels::add(r.data(), g.row(i).data(), r.data(), g.cols());
      accumulate(t, row, r);
    }
  });
}

Var scale_by(Var a, Var s) {
  Tape& t = tape_of(a, s);
  require_shape(s.value(), 1, 1, "scale_by");
  const double c = s.value()[0];
  const bool rg = t.requires_grad(a.id()) || t.requires_grad(s.id());
  return t.push(map(a.value(), [c](double x) { return c * x; }), rg, [a, s](Tape& t, std::size_t self) {
    const Matrix& g = t.grad(self);
    const double c = s.value()[0];
    accumulate(t, a, map(g, [c](double x) { return c * x; }));
    if (t.requires_grad(s.id())) {
      Matrix d(1, 1);
      d[0] = kernels::dot(g.data(), a.value().data(), g.size());
      accumulate(t, s, d);
    }
  });
}

Var sigmoid(Var a) {
  Tape& t = tape_of(a);
  return t.push(map(a.value(), logistic), t.requires_grad(a.id()), [a](Tape& t, std::size_t self) {
    const Matrix& y = t.value(self);
    const Matrix& g = t.grad(self);
    Matrix d(g.rows(), g.cols());
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = g[i] * y[i] * (1.0 - y[i]);
    accumulate(t, a, d);
  });
}

Var tanh(Var a) {
  Tape& t = tape_of(a);
  return t.push(map(a.value(), [](double x) { return std::tanh(x); }), t.requires_grad(a.id()),
                [a](Tape& t, std::size_t self) {
                  const Matrix& y = t.value(self);
                  const Matrix& g = t.grad(self);
                  Matrix d(g.rows(), g.cols());
                  for (std::size_t i = 0; i < d.size(); ++i) d[i] = g[i] * (1.0 - y[i] * y[i]);
                  accumulate(t, a, d);
                });
}

Var log_sigmoid(Var a) {
  Tape& t = tape_of(a);
  auto f = [](double x) { return std::min(x, 0.0) - std::log1p(std::exp(-std::abs(x))); };
  return t.push(map(a.value(), f), t.requires_grad(a.id()), [a](Tape& t, std::size_t self) {
    const Matrix& x = a.value();
    const Matrix& g = t.grad(self);
    Matrix d(g.rows(), g.cols());
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = g[i] * logistic(-x[i]);
    accumulate(t, a, d);
  });
}

Var log_clamped(Var a, double eps) {
  Tape& t = tape_of(a);
  return t.push(map(a.value(), [eps](double x) { return std::log(std::max(x, eps)); }), t.requires_grad(a.id()),
                [a, eps](Tape& t, std::size_t self) {
                  const Matrix& x = a.value();
                  const Matrix& g = t.grad(self);
                  Matrix d(g.rows(), g.cols());
                  for (std::size_t i = 0; i < d.size(); ++i) d[i] = x[i] > eps ? g[i] / x[i] : 0.0;
                  accumulate(t, a, d);
                });
}

Var concat_cols(std::span<const Var> parts) {
  if (parts.empty()) throw std::invalid_argument("concat_cols: no inputs");
  Tape& t = tape_of(parts[0]);
  const std::size_t rows = parts[0].rows();
  std::size_t cols = 0;
  bool rg = false;
  for (const Var& p : parts) {
    if (p.tape() != &t) throw std::invalid_argument("concat_cols: variables from different tapes");
    if (p.rows() != rows) throw std::invalid_argument("concat_cols: row count mismatch");
    cols += p.cols();
    rg = rg || t.requires_grad(p.id());
  }
  Matrix out(rows, cols);
  std::size_t offset = 0;
  for (const Var& p : parts) {
    const Matrix& v = p.value();
    for (std::size_t r = 0; r < rows; ++r) std::copy(v.row(r).begin(), v.row(r).end(), out.row(r).begin() + offset);
    offset += v.cols();
  }
  std::vector<Var> saved(parts.begin(), parts.end());
  return t.push(std::move(out), rg, [saved](Tape& t, std::size_t self) {
    const Matrix& g = t.grad(self);
    std::size_t offset = 0;
    for (const Var& p : saved) {
      if (t.requires_grad(p.id())) {
        Matrix d(g.rows(), p.cols());
        for (std::size_t r = 0; r < g.rows(); ++r) {
          auto src = g.row(r).subspan(offset, p.cols());
          std::copy(src.begin(), src.end(), d.row(r).begin());
        }
        accumulate(t, p, d);
      }
      offset += p.cols();
    }
  });
}

Var concat_rows(std::span<const Var> parts) {
  if (parts.empty()) throw std::invalid_argument("concat_rows: no inputs");
  Tape& t = tape_of(parts[0]);
  const std::size_t cols = parts[0].cols();
  std::size_t rows = 0;
  bool rg = false;
  for (const Var& p : parts) {
    if (p.tape() != &t) throw std::invalid_argument("concat_rows: variables from different tapes");
    if (p.cols() != cols) throw std::invalid_argument("concat_rows: column count mismatch");
    rows += p.rows();
    rg = rg || t.requires_grad(p.id());
  }
  Matrix out(rows, cols);
  std::size_t offset = 0;
  for (const Var& p : parts) {
    std::copy(p.value().data(), p.value().data() + p.value().size(), out.data() + offset * cols);
    offset += p.rows();
  }
  std::vector<Var> saved(parts.begin(), parts.end());
  return t.push(std::move(out), rg, [saved](Tape& t, std::size_t self) {
    const Matrix& g = t.grad(self);
    std::size_t offset = 0;
    for (const Var& p : saved) {
      if (t.requires_grad(p.id())) {
        Matrix d(p.rows(), p.cols());
        std::copy(g.data() + offset * g.cols(), g.data() + (offset + p.rows()) * g.cols(), d.data());
        accumulate(t, p, d);
      }
      offset += p.rows();
    }
  });
}

Var slice_rows(Var a, std::size_t begin, std::size_t count) {
  Tape& t = tape_of(a);
  if (begin + count > a.rows()) throw std::out_of_range("slice_rows: range exceeds rows");
  const std::size_t cols = a.cols();
  Matrix out(count, cols);
  std::copy(a.value().data() + begin * cols, a.value().data() + (begin + count) * cols, out.data());
  return t.push(std::move(out), t.requires_grad(a.id()), [a, begin](Tape& t, std::size_t self) {
    const Matrix& g = t.grad(self);
    Matrix& ga = t.grad_mut(a.id());
    kernels::add(ga.data() + begin * g.cols(), g.data(), ga.data() + begin * g.cols(), g.size());
  });
}

Var gather_rows(Var a, std::span<const std::size_t> index) {
  Tape& t = tape_of(a);
  const std::size_t cols = a.cols();
  Matrix out(index.size(), cols);
  for (std::size_t r = 0; r < index.size(); ++r) {
    if (index[r] >= a.rows()) throw std::out_of_range("gather_rows: index out of range");
    auto src = a.value().row(index[r]);
    std::copy(src.begin(), src.end(), out.row(r).begin());
  }
  std::vector<std::size_t> idx(index.begin(), index.end());
  return t.push(std::move(out), t.requires_grad(a.id()), [a, idx = std::move(idx)](Tape& t, std::size_t self) {
    const Matrix& g = t.grad(self);
    Matrix& ga = t.grad_mut(a.id());
    for (std::size_t r = 0; r < idx.size(); ++r)
      kernels::add(ga.row(idx[r]).data(), g.row(r).data(), ga.row(idx[r]).data(), g.cols());
  });
}

Var mean_rows(Var a) {
  Tape& t = tape_of(a);
  const std::size_t n = a.rows();
  if (n == 0) throw std::invalid_argument("mean_rows: empty input");
  Matrix out(1, a.cols());
  for (std::size_t r = 0; r < n; ++r) kernels::add(out.data(), a.value().row(r).data(), out.data(), a.cols());
  for (std::size_t c = 0; c < out.cols(); ++c) out[c] /= static_cast<double>(n);
  return t.push(std::move(out), t.requires_grad(a.id()), [a, n](Tape& t, std::size_t self) {
    const Matrix& g = t.grad(self);
    Matrix& ga = t.grad_mut(a.id());
    const double inv = 1.0 / static_cast<double>(n);
    for (std::size_t r = 0; r < n; ++r) kernels::axpy(inv, g.data(), ga.row(r).data(), g.cols());
  });
}

Var sum(Var a) {
  Tape& t = tape_of(a);
  Matrix out(1, 1);
  for (double v : a.value().flat()) out[0] += v;
  return t.push(std::move(out), t.requires_grad(a.id()), [a](Tape& t, std::size_t self) {
    const double g = t.grad(self)[0];
    Matrix& ga = t.grad_mut(a.id());
    for (double& v : ga.flat()) v += g;
  });
}

Var mean(Var a) {
  if (a.value().size() == 0) throw std::invalid_argument("mean: empty input");
  return scale(sum(a), 1.0 / static_cast<double>(a.value().size()));
}

Var row_dot(Var a, Var b) {
  Tape& t = tape_of(a, b);
  check_same(a.value(), b.value(), "row_dot");
  Matrix out(a.rows(), 1);
  for (std::size_t r = 0; r < a.rows(); ++r) out[r] = kernels::dot(a.value().row(r).data(), b.value().row(r).data(), a.cols());
  const bool rg = t.requires_grad(a.id()) || t.requires_grad(b.id());
  return t.push(std::move(out), rg, [a, b](Tape& t, std::size_t self) {
    const Matrix& g = t.grad(self);
    for (auto [target, other] : {std::pair{a, b}, std::pair{b, a}}) {
      if (!t.requires_grad(target.id())) continue;
      Matrix& gt = t.grad_mut(target.id());
      for (std::size_t r = 0; r < g.rows(); ++r) kernels::axpy(g[r], other.value().row(r).data(), gt.row(r).data(), gt.cols());
    }
  });
}

Var softmax_rows(Var a) {
  Tape& t = tape_of(a);
  Matrix out(a.rows(), a.cols());
  for (std::size_t r = 0; r < a.rows(); ++r) {
    auto x = a.value().row(r);
    auto y = out.row(r);
    const double mx = *std::max_element(x.begin(), x.end());
    double z = 0.0;
    for (std::size_t c = 0; c < x.size(); ++c) {
      y[c] = std::exp(x[c] - mx);
      z += y[c];
    }
    for (double& v : y) v /= z;
  }
  return t.push(std::move(out), t.requires_grad(a.id()), [a](Tape& t, std::size_t self) {
    const Matrix& y = t.value(self);
    const Matrix& g = t.grad(self);
    Matrix d(g.rows(), g.cols());
    for (std::size_t r = 0; r < g.rows(); ++r) {
      const double inner = kernels::dot(g.row(r).data(), y.row(r).data(), g.cols());
      for (std::size_t c = 0; c < g.cols(); ++c) d(r, c) = y(r, c) * (g(r, c) - inner);
    }
    accumulate(t, a, d);
  });
}

Var masked_row_cosine(Var x, const Matrix& mask) {
  Tape& t = tape_of(x);
  const std::size_t n = x.rows();
  require_shape(mask, n, n, "masked_row_cosine mask");
  const Matrix& xv = x.value();
  std::vector<double> norms(n);
  for (std::size_t i = 0; i < n; ++i) norms[i] = std::sqrt(kernels::dot(xv.row(i).data(), xv.row(i).data(), xv.cols()));
  Matrix out(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (mask(i, j) == 0.0 || norms[i] == 0.0 || norms[j] == 0.0) continue;
      out(i, j) = kernels::dot(xv.row(i).data(), xv.row(j).data(), xv.cols()) / (norms[i] * norms[j]);
    }
  return t.push(std::move(out), t.requires_grad(x.id()), [x, norms, mask](Tape& t, std::size_t self) {
    const Matrix& g = t.grad(self);
    const Matrix& cosv = t.value(self);
    const Matrix& xv = x.value();
    Matrix& gx = t.grad_mut(x.id());
    const std::size_t n = xv.rows();
    const std::size_t w = xv.cols();
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        const double gij = g(i, j);
        if (gij == 0.0 || mask(i, j) == 0.0 || norms[i] == 0.0 || norms[j] == 0.0) continue;
        const double c = cosv(i, j);
        const double inv = 1.0 / (norms[i] * norms[j]);
        // d cos / d x_i = x_j / (|x_i||x_j|) - cos * x_i / |x_i|^2, and symmetrically for x_j.
        kernels::axpy(gij * inv, xv.row(j).data(), gx.row(i).data(), w);
        kernels::axpy(-gij * c / (norms[i] * norms[i]), xv.row(i).data(), gx.row(i).data(), w);
        kernels::axpy(gij * inv, xv.row(i).data(), gx.row(j).data(), w);
        kernels::axpy(-gij * c / (norms[j] * norms[j]), xv.row(j).data(), gx.row(j).data(), w);
      }
  });
}

Var pairwise_distances(Var x) {
  Tape& t = tape_of(x);
  const Matrix& xv = x.value();
  const std::size_t m = xv.rows();
  Matrix out(m, m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j) {
      const double d = std::sqrt(kernels::sqdist(xv.row(i).data(), xv.row(j).data(), xv.cols()));
      out(i, j) = d;
      out(j, i) = d;
    }
  return t.push(std::move(out), t.requires_grad(x.id()), [x](Tape& t, std::size_t self) {
    const Matrix& g = t.grad(self);
    const Matrix& dist = t.value(self);
    const Matrix& xv = x.value();
    Matrix& gx = t.grad_mut(x.id());
    const std::size_t m = xv.rows();
    const std::size_t w = xv.cols();
    std::vector<double> diff(w);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = i + 1; j < m; ++j) {
        if (dist(i, j) == 0.0) continue;
        const double coeff = (g(i, j) + g(j, i)) / dist(i, j);
        if (coeff == 0.0) continue;
        for (std::size_t c = 0; c < w; ++c) diff[c] = xv(i, c) - xv(j, c);
        kernels::axpy(coeff, diff.data(), gx.row(i).data(), w);
        kernels::axpy(-coeff, diff.data(), gx.row(j).data(), w);
      }
  });
}

namespace {

Matrix center(const Matrix& d) {
  const std::size_t r = d.rows();
  const std::size_t c = d.cols();
  std::vector<double> row_mean(r, 0.0), col_mean(c, 0.0);
  double grand = 0.0;
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) {
      row_mean[i] += d(i, j);
      col_mean[j] += d(i, j);
      grand += d(i, j);
    }
  for (double& v : row_mean) v /= static_cast<double>(c);
  for (double& v : col_mean) v /= static_cast<double>(r);
  grand /= static_cast<double>(r * c);
  Matrix out(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) out(i, j) = d(i, j) - row_mean[i] - col_mean[j] + grand;
  return out;
}

}  // namespace

Var double_center(Var d) {
  Tape& t = tape_of(d);
  // The centering map is a self-adjoint projection, so the same map
  // carries gradients back.
  return t.push(center(d.value()), t.requires_grad(d.id()),
                [d](Tape& t, std::size_t self) { accumulate(t, d, center(t.grad(self))); });
}

Var dcor_ratio(Var cov2, Var var_x2, Var var_y2) {
  Tape& t = tape_of(cov2, var_x2);
  tape_of(cov2, var_y2);
  const double c = cov2.scalar();
  const double vx = var_x2.scalar();
  const double vy = var_y2.scalar();
  Matrix out(1, 1);
  const bool defined = c > 0.0 && vx > 0.0 && vy > 0.0;
  if (defined) out[0] = std::sqrt(c / std::sqrt(vx * vy));
  const bool rg = t.requires_grad(cov2.id()) || t.requires_grad(var_x2.id()) || t.requires_grad(var_y2.id());
  return t.push(std::move(out), rg, [cov2, var_x2, var_y2, defined](Tape& t, std::size_t self) {
    if (!defined) return;
    const double r = t.value(self)[0];
    const double g = t.grad(self)[0];
    // r = c^(1/2) (vx vy)^(-1/4)
    Matrix d(1, 1);
    d[0] = g * r / (2.0 * cov2.scalar());
    accumulate(t, cov2, d);
    d[0] = -g * r / (4.0 * var_x2.scalar());
    accumulate(t, var_x2, d);
    d[0] = -g * r / (4.0 * var_y2.scalar());
    accumulate(t, var_y2, d);
  });
}

}  // namespace dgcl::ag
