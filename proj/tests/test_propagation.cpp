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


#include <vector>

#include "doctest.h"
#include "dgcl/propagation.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace dgcl;
using testing::max_abs_diff;
using testing::random_matrix;

namespace {

GgnnWeights random_weights(std::size_t w, Rng& rng, double scale = 0.5) {
  auto out = zero_ggnn_weights(w);
  out.visit([&](const char*, Matrix& m) { m = random_matrix(m.rows(), m.cols(), rng, scale); });
  return out;
}

Session session(std::vector<ItemIndex> items) { return Session{std::move(items), 0.0}; }

}  // namespace

TEST_CASE("zero weights halve the input") {
  Rng rng(1);
  const Matrix x = random_matrix(3, 4, rng);
  const auto g = build_session_graph(session({0, 1, 2}));
  const Matrix out = ggnn_step(x, g.adj_in, g.adj_out, zero_ggnn_weights(4));
  for (std::size_t i = 0; i < x.size(); ++i) CHECK(out[i] == 0.5 * x[i]);
}

TEST_CASE("two-node step matches the oracle") {
  Rng rng(3);
  const auto w = random_weights(3, rng);
  const Matrix x = random_matrix(2, 3, rng);
  const auto g = build_session_graph(session({0, 1}));
  const Matrix lib = ggnn_step(x, g.adj_in, g.adj_out, w);
  CHECK(max_abs_diff(lib, oracle::ggnn_step(x, g.adj_in, g.adj_out, w)) <= 1e-10);
  CHECK(max_abs_diff(run_original(g, x, w, 1), lib) == 0.0);
}

TEST_CASE("multi-layer propagation on a cyclic session matches the oracle") {
  Rng rng(4);
  const auto w = random_weights(4, rng);
  const auto g = build_session_graph(session({0, 1, 2, 1, 3}));
  const Matrix x = random_matrix(4, 4, rng);
  Matrix ref = x;
  for (int l = 0; l < 3; ++l) ref = oracle::ggnn_step(ref, g.adj_in, g.adj_out, w);
  CHECK(max_abs_diff(run_original(g, x, w, 3), ref) <= 1e-10);
  CHECK(run_original(g, x, w, 3).rows() == g.node_count());
}

TEST_CASE("zero layers return the input") {
  Rng rng(5);
  const auto w = random_weights(2, rng);
  const auto g = build_session_graph(session({0, 1, 0}));
  const Matrix x = random_matrix(2, 2, rng);
  CHECK(run_original(g, x, w, 0) == x);
}

TEST_CASE("an isolated node aggregates only the biases") {
  Rng rng(6);
  auto w = random_weights(2, rng);
  const Matrix x{{0.3, -0.7}};
  const Matrix none(1, 1);
  // With c = [b_in, b_out] the update gate reads c W_z + x U_z.
  const Matrix out = ggnn_step(x, none, none, w);
  auto zeroed = w;
  zeroed.w_in = Matrix(2, 2);
  zeroed.w_out = Matrix(2, 2);
  CHECK(max_abs_diff(out, ggnn_step(x, none, none, zeroed)) == 0.0);
  CHECK(max_abs_diff(out, oracle::ggnn_step(x, none, none, w)) <= 1e-12);
}

TEST_CASE("factor channel with zero cosine equals the isolated case") {
  Rng rng(7);
  const auto w = random_weights(2, rng);
  const auto g = build_session_graph(session({0, 1, 2}));
  const Matrix f0 = random_matrix(3, 2, rng);
  const FactorAdjacency zero{0, Matrix(3, 3)};
  const Matrix none(3, 3);
  CHECK(max_abs_diff(run_factor(g, zero, f0, w, 1), ggnn_step(f0, none, none, w)) == 0.0);
}

TEST_CASE("factor channel uses cosine-weighted matrices") {
  Rng rng(8);
  const auto w = random_weights(3, rng);
  const auto g = build_session_graph(session({0, 1, 2, 1}));
  const Matrix f0 = random_matrix(3, 3, rng);
  const auto fa = build_factor_adjacency(g, f0, 0);
  Matrix out(3, 3), in(3, 3);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) {
      out(i, j) = fa.weights(i, j) * g.adj_out(i, j);
      in(i, j) = fa.weights(j, i) * g.adj_in(i, j);
    }
  CHECK(max_abs_diff(run_factor(g, fa, f0, w, 1), oracle::ggnn_step(f0, in, out, w)) <= 1e-10);
}

TEST_CASE("star channel with theta zero reproduces the original channel bit for bit") {
  Rng rng(9);
  const auto w = random_weights(4, rng);
  const auto g = build_session_graph(session({0, 1, 2, 0, 3}));
  const Matrix x = random_matrix(4, 4, rng);
  const auto star = build_star_graph(g, x, 0.0, 3);
  Matrix with_sat(5, 4);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t c = 0; c < 4; ++c) with_sat(i, c) = x(i, c);
  for (std::size_t c = 0; c < 4; ++c) with_sat(4, c) = star.satellite_embedding(0, c);
  CHECK(run_star(star.graph, with_sat, w, 2) == run_original(g, x, w, 2));
  CHECK_THROWS(run_star(star.graph, x, w, 1));
}

TEST_CASE("star channel with a fixed seed matches the oracle") {
  Rng rng(10);
  const auto w = random_weights(3, rng);
  const auto g = build_session_graph(session({0, 1, 2}));
  const Matrix x = random_matrix(3, 3, rng);
  const std::uint64_t seed = 12345;
  const auto star = build_star_graph(g, x, 0.5, seed);

  // Rebuild the star adjacency from the same draws.
  Matrix a(4, 4);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) a(i, j) = g.adjacency(i, j);
  Rng draws(seed);
  for (std::size_t i = 0; i < 3; ++i) {
    if (draws.uniform() < 0.5) a(3, i) = 1.0;
    if (draws.uniform() < 0.5) a(i, 3) = 1.0;
  }
  CHECK(a == star.graph.adjacency);
  const auto [out, in] = oracle::normalized_out_in(a);
  Matrix with_sat(4, 3);
  for (std::size_t c = 0; c < 3; ++c) {
    for (std::size_t i = 0; i < 3; ++i) with_sat(i, c) = x(i, c);
    with_sat(3, c) = (x(0, c) + x(1, c) + x(2, c)) / 3.0;
  }
  const Matrix full = oracle::ggnn_step(with_sat, in, out, w);
  const Matrix lib = run_star(star.graph, with_sat, w, 1);
  REQUIRE(lib.rows() == 3);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t c = 0; c < 3; ++c) CHECK(std::abs(lib(i, c) - full(i, c)) <= 1e-10);
}

TEST_CASE("theta one lets a single node hear the satellite") {
  Rng rng(11);
  const auto w = random_weights(2, rng);
  const auto g = build_session_graph(session({5}));
  const Matrix x{{0.4, -0.1}};
  const auto star = build_star_graph(g, x, 1.0, 0);
  CHECK(star.graph.adjacency(0, 1) == 1.0);
  CHECK(star.graph.adjacency(1, 0) == 1.0);
  const Matrix with_sat{{0.4, -0.1}, {0.4, -0.1}};
  const Matrix lib = run_star(star.graph, with_sat, w, 1);
  const Matrix alone = run_original(g, x, w, 1);
  CHECK(max_abs_diff(lib, alone) > 1e-6);
}

TEST_CASE("gradients of the cell match finite differences") {
  Rng rng(12);
  auto w = random_weights(3, rng);
  Matrix x = random_matrix(3, 3, rng);
  const auto g = build_session_graph(session({0, 1, 2, 0}));
  const Matrix weight = random_matrix(3, 3, rng);
  auto loss = [&](ag::Tape& t, ag::Var xv, const GgnnVars& wv) {
    return ag::sum(ag::hadamard(propagate(xv, t.constant(g.adj_in), t.constant(g.adj_out), wv, 2), t.constant(weight)));
  };
  ag::Tape tape;
  const ag::Var xv = tape.variable(x);
  const GgnnVars wv = w.map([&](const Matrix& m) { return tape.variable(m); });
  tape.backward(loss(tape, xv, wv));
  auto recompute = [&] {
    ag::Tape t;
    return loss(t, t.constant(x), w.map([&](const Matrix& m) { return t.constant(m); })).scalar();
  };
  auto r = testing::check_gradient(x, xv.grad(), recompute);
  CHECK(r.worst < testing::kGradientTolerance);
  std::vector<Matrix> grads;
  auto wv_copy = wv;
  wv_copy.visit([&](const char*, ag::Var& v) { grads.push_back(v.grad()); });
  std::size_t k = 0;
  w.visit([&](const char* name, Matrix& m) {
    CAPTURE(name);
    const auto res = testing::check_gradient(m, grads[k++], recompute);
    INFO(testing::describe(res));
    CHECK(res.worst < testing::kGradientTolerance);
  });
}
