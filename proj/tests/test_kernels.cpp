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


#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <vector>

#include "doctest.h"
#include "dgcl/kernels.hpp"
#include "dgcl/random.hpp"

namespace k = dgcl::kernels;

namespace {

std::vector<double> random_vector(std::size_t n, dgcl::Rng& rng) {
  std::vector<double> v(n);
  for (auto& x : v) x = rng.uniform(-2.0, 2.0);
  return v;
}

// Lengths straddling every lane count and remainder.
const std::size_t kLengths[] = {0, 1, 2, 3, 4, 5, 7, 8, 9, 15, 16, 17, 31, 100, 1001};

}  // namespace

TEST_CASE("scalar table is always available and first") {
  const auto isas = k::available_isas();
  REQUIRE_FALSE(isas.empty());
  CHECK(isas.front() == k::Isa::kScalar);
  CHECK(k::table_for(k::Isa::kScalar).isa == k::Isa::kScalar);
}

TEST_CASE("forced scalar environment pins the active table") {
  const char* forced = std::getenv("DGCL_FORCE_SCALAR");
  if (forced != nullptr && std::string(forced) == "1") {
    CHECK(k::active().isa == k::Isa::kScalar);
  } else {
    CHECK(k::active().isa == k::available_isas().back());
  }
}

TEST_CASE("select rejects unavailable instruction sets") {
  const auto isas = k::available_isas();
  for (k::Isa isa : {k::Isa::kAvx2, k::Isa::kNeon}) {
    if (std::find(isas.begin(), isas.end(), isa) == isas.end()) CHECK_THROWS_AS(k::select(isa), std::invalid_argument);
  }
  const k::Isa before = k::active().isa;
  k::select(k::Isa::kScalar);
  CHECK(k::active().isa == k::Isa::kScalar);
  k::select(before);
}

TEST_CASE("every variant matches the scalar reference") {
  const k::KernelTable& ref = k::scalar_table();
  dgcl::Rng rng(11);
  for (k::Isa isa : k::available_isas()) {
    const k::KernelTable& t = k::table_for(isa);
    CAPTURE(k::isa_name(isa));
    for (std::size_t n : kLengths) {
      CAPTURE(n);
      const auto x = random_vector(n, rng);
      const auto y = random_vector(n, rng);

      // Element-wise kernels round identically, so compare bits.
      std::vector<double> a(n), b(n);
      ref.add(x.data(), y.data(), a.data(), n);
      t.add(x.data(), y.data(), b.data(), n);
      CHECK(a == b);
      ref.mul(x.data(), y.data(), a.data(), n);
      t.mul(x.data(), y.data(), b.data(), n);
      CHECK(a == b);
      a = y, b = y;
      ref.axpy(0.37, x.data(), a.data(), n);
      t.axpy(0.37, x.data(), b.data(), n);
      CHECK(a == b);

      // Reductions reassociate; bound by n ulps of the absolute sum.
      double mag = 0.0, sq = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        mag += std::abs(x[i] * y[i]);
        sq += (x[i] - y[i]) * (x[i] - y[i]);
      }
      const double tol = 4.0 * (n + 1) * 2.3e-16;
      CHECK(std::abs(ref.dot(x.data(), y.data(), n) - t.dot(x.data(), y.data(), n)) <= tol * (mag + 1.0));
      CHECK(std::abs(ref.sqdist(x.data(), y.data(), n) - t.sqdist(x.data(), y.data(), n)) <= tol * (sq + 1.0));
    }
  }
}

TEST_CASE("kernels support in-place output") {
  for (k::Isa isa : k::available_isas()) {
    const k::KernelTable& t = k::table_for(isa);
    std::vector<double> x{1, 2, 3, 4, 5}, y{5, 4, 3, 2, 1};
    t.add(x.data(), y.data(), x.data(), 5);
    CHECK(x == std::vector<double>{6, 6, 6, 6, 6});
    t.mul(x.data(), y.data(), y.data(), 5);
    CHECK(y == std::vector<double>{30, 24, 18, 12, 6});
  }
}

TEST_CASE("scalar dot and sqdist on a known input") {
  const double x[] = {1, 2, 3};
  const double y[] = {4, -5, 6};
  CHECK(k::scalar_table().dot(x, y, 3) == 12.0);
  CHECK(k::scalar_table().sqdist(x, y, 3) == 9.0 + 49.0 + 9.0);
}
