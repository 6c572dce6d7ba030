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


#include <cmath>
#include <set>
#include <vector>

#include "doctest.h"
#include "dgcl/contrast.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace dgcl;
using testing::random_matrix;

namespace {

const double kTwoLn2 = 2.0 * std::log(2.0);

}  // namespace

TEST_CASE("negatives avoid their own position and cover the rest") {
  Rng rng(1);
  const auto neg = sample_negatives(4, 3, rng);
  REQUIRE(neg.size() == 12);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t m = 0; m < 3; ++m) CHECK(neg[i * 3 + m] != i);

  std::set<std::size_t> seen;
  Rng more(2);
  for (int t = 0; t < 200; ++t)
    for (std::size_t j : sample_negatives(3, 1, more)) seen.insert(j);
  CHECK(seen == std::set<std::size_t>{0, 1, 2});
  CHECK_THROWS(sample_negatives(1, 1, rng));
}

TEST_CASE("zero discriminator gives two ln two per pair") {
  // Orthogonal views make every dot-product score zero.
  const Matrix a{{1, 0, 0, 0}, {0, 1, 0, 0}, {1, 1, 0, 0}};
  const Matrix b{{0, 0, 1, 0}, {0, 0, 0, 1}, {0, 0, 2, -1}};
  const ContrastConfig cfg;
  const auto item = item_cl_loss(a, b, DiscriminatorForm::kDot, Matrix(), cfg, 3);
  REQUIRE(item);
  CHECK(std::abs(*item - kTwoLn2) <= 1e-12);

  const Matrix zero(4, 4);
  Rng rng(4);
  const auto bil = item_cl_loss(random_matrix(3, 4, rng), random_matrix(3, 4, rng), DiscriminatorForm::kBilinear, zero,
                                cfg, 3);
  CHECK(std::abs(*bil - kTwoLn2) <= 1e-12);

  const std::vector<Matrix> fo{random_matrix(3, 2, rng), random_matrix(3, 2, rng)};
  const std::vector<Matrix> fa{random_matrix(3, 2, rng), random_matrix(3, 2, rng)};
  const auto factor = factor_cl_loss(fo, fa, DiscriminatorForm::kBilinear, Matrix(2, 2), cfg, 3);
  CHECK(std::abs(*factor - 2.0 * kTwoLn2) <= 1e-12);  // summed over two factors
}

TEST_CASE("item-level loss matches the enumerated-pair oracle") {
  Rng rng(5);
  for (std::size_t m : {1u, 3u}) {
    const Matrix o = random_matrix(3, 4, rng);
    const Matrix a = random_matrix(3, 4, rng);
    ContrastConfig cfg;
    cfg.negatives_per_positive = m;
    CHECK(std::abs(*item_cl_loss(o, a, DiscriminatorForm::kDot, Matrix(), cfg, 77) - oracle::item_contrast(o, a, m, 77)) <=
          1e-10);
    const Matrix w = random_matrix(4, 4, rng);
    CHECK(std::abs(*item_cl_loss(o, a, DiscriminatorForm::kBilinear, w, cfg, 78) -
                   oracle::item_contrast(o, a, m, 78, &w)) <= 1e-10);
  }
}

TEST_CASE("factor-level loss matches the oracle for both negative sources") {
  Rng rng(6);
  std::vector<Matrix> o, a;
  for (int k = 0; k < 3; ++k) {
    o.push_back(random_matrix(4, 2, rng));
    a.push_back(random_matrix(4, 2, rng));
  }
  ContrastConfig cfg;
  CHECK(std::abs(*factor_cl_loss(o, a, DiscriminatorForm::kDot, Matrix(), cfg, 9) -
                 oracle::factor_contrast(o, a, 1, 9, true)) <= 1e-10);
  cfg.factor_negatives = FactorNegatives::kCrossView;
  CHECK(std::abs(*factor_cl_loss(o, a, DiscriminatorForm::kDot, Matrix(), cfg, 9) -
                 oracle::factor_contrast(o, a, 1, 9, false)) <= 1e-10);
}

TEST_CASE("single node sessions have no contrastive term") {
  const ContrastConfig cfg;
  CHECK_FALSE(item_cl_loss(Matrix{{1.0, 2.0}}, Matrix{{1.0, 2.0}}, DiscriminatorForm::kDot, Matrix(), cfg, 0));
  CHECK_FALSE(factor_cl_loss({Matrix{{1.0}}}, {Matrix{{1.0}}}, DiscriminatorForm::kDot, Matrix(), cfg, 0));
}

TEST_CASE("loss is reproducible and non-negative") {
  Rng rng(7);
  const Matrix o = random_matrix(5, 3, rng, 3.0);
  const Matrix a = random_matrix(5, 3, rng, 3.0);
  const ContrastConfig cfg;
  const double x = *item_cl_loss(o, a, DiscriminatorForm::kDot, Matrix(), cfg, 42);
  CHECK(x == *item_cl_loss(o, a, DiscriminatorForm::kDot, Matrix(), cfg, 42));
  CHECK(x >= 0.0);
}

TEST_CASE("separated identical views score below the zero baseline") {
  Matrix v(4, 4);
  for (std::size_t i = 0; i < 4; ++i) v(i, i) = 3.0;
  const auto loss = item_cl_loss(v, v, DiscriminatorForm::kDot, Matrix(), ContrastConfig{}, 1);
  CHECK(*loss < kTwoLn2);
}

TEST_CASE("extreme scores approach zero loss without overflow") {
  ag::Tape t;
  const ag::Var loss = bce_contrast(t.constant({{800.0}, {900.0}}), t.constant({{-800.0}}));
  CHECK(loss.scalar() == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(std::isfinite(bce_contrast(t.constant({{-800.0}}), t.constant({{800.0}})).scalar()));
}

TEST_CASE("alpha mixing") {
  CHECK(mix(1.0, 3.0, 0.5) == 2.0);
  CHECK(mix(1.0, 3.0, 1.0) == 1.0);
  CHECK(mix(1.0, 3.0, 0.0) == 3.0);
  CHECK_THROWS(mix(1.0, 3.0, 1.5));
}

TEST_CASE("factor view of the original uses the shared projection") {
  Rng rng(8);
  FactorProjection p;
  p.weights = {random_matrix(4, 2, rng), random_matrix(4, 2, rng)};
  p.biases = {random_matrix(1, 2, rng), random_matrix(1, 2, rng)};
  const Matrix x = random_matrix(3, 4, rng);
  const auto a = factor_view_of_original(x, p);
  const auto b = project(x, p);
  CHECK(a == b);
}

TEST_CASE("training only the discriminator lowers the loss") {
  Rng rng(9);
  const Matrix o = random_matrix(5, 3, rng);
  const Matrix a = random_matrix(5, 3, rng);
  Parameter w(Matrix::identity(3));
  const ContrastConfig cfg;
  double first = 0.0, last = 0.0;
  for (int step = 0; step < 100; ++step) {
    ag::Tape t;
    const Discriminator disc{DiscriminatorForm::kBilinear, t.parameter(w)};
    const ag::Var loss = *item_cl_loss(t.constant(o), t.constant(a), disc, cfg, 5);
    if (step == 0) first = loss.scalar();
    last = loss.scalar();
    w.zero_grad();
    t.backward(loss);
    for (std::size_t i = 0; i < w.value.size(); ++i) w.value[i] -= 0.1 * w.grad[i];
  }
  CHECK(last < first);
}

TEST_CASE("contrastive gradients match finite differences") {
  Rng rng(10);
  Matrix o = random_matrix(4, 3, rng);
  Matrix a = random_matrix(4, 3, rng);
  Matrix w = random_matrix(3, 3, rng);
  std::vector<Matrix> fo{random_matrix(4, 2, rng), random_matrix(4, 2, rng)};
  std::vector<Matrix> fa{random_matrix(4, 2, rng), random_matrix(4, 2, rng)};
  Matrix wf = random_matrix(2, 2, rng);
  ContrastConfig cfg;
  cfg.negatives_per_positive = 2;

  ag::Tape t;
  const ag::Var ov = t.variable(o), av = t.variable(a), wv = t.variable(w);
  t.backward(*item_cl_loss(ov, av, Discriminator{DiscriminatorForm::kBilinear, wv}, cfg, 3));
  auto item = [&] { return *item_cl_loss(o, a, DiscriminatorForm::kBilinear, w, cfg, 3); };
  for (auto [m, g] : {std::pair{&o, ov.grad()}, std::pair{&a, av.grad()}, std::pair{&w, wv.grad()}}) {
    const auto r = testing::check_gradient(*m, g, item);
    INFO(testing::describe(r));
    CHECK(r.worst < testing::kGradientTolerance);
  }

  for (FactorNegatives mode : {FactorNegatives::kWithinView, FactorNegatives::kCrossView}) {
    cfg.factor_negatives = mode;
    ag::Tape tf;
    std::vector<ag::Var> fov, fav;
    for (const auto& m : fo) fov.push_back(tf.variable(m));
    for (const auto& m : fa) fav.push_back(tf.variable(m));
    const ag::Var wfv = tf.variable(wf);
    tf.backward(*factor_cl_loss(fov, fav, Discriminator{DiscriminatorForm::kBilinear, wfv}, cfg, 4));
    auto factor = [&] { return *factor_cl_loss(fo, fa, DiscriminatorForm::kBilinear, wf, cfg, 4); };
    for (std::size_t k = 0; k < 2; ++k) {
      CHECK(testing::check_gradient(fo[k], fov[k].grad(), factor).worst < testing::kGradientTolerance);
      CHECK(testing::check_gradient(fa[k], fav[k].grad(), factor).worst < testing::kGradientTolerance);
    }
    CHECK(testing::check_gradient(wf, wfv.grad(), factor).worst < testing::kGradientTolerance);
  }
}
