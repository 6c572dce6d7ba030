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


// Shared helpers for the test binaries.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <string>

#include "dgcl/autograd.hpp"
#include "dgcl/matrix.hpp"
#include "dgcl/random.hpp"

namespace dgcl::testing {

inline Matrix random_matrix(std::size_t rows, std::size_t cols, Rng& rng, double scale = 1.0) {
  Matrix m(rows, cols);
  for (auto& v : m.flat()) v = rng.uniform(-scale, scale);
  return m;
}

inline double max_abs_diff(const Matrix& a, const Matrix& b) {
  if (!a.same_shape(b)) return INFINITY;
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
  return worst;
}

inline constexpr double kFiniteDifferenceStep = 1e-5;
inline constexpr double kGradientTolerance = 1e-4;
// Below this magnitude both gradients are treated as zero; central
// differences at h = 1e-5 carry about 1e-10 of round-off.
inline constexpr double kGradientFloor = 1e-6;

struct GradientCheck {
  double worst = 0.0;  // largest relative error seen
  std::size_t entry = 0;
  double analytic = 0.0;
  double numeric = 0.0;
  std::size_t checked = 0;
};

inline double relative_error(double a, double n) {
  return std::abs(a - n) / std::max({std::abs(a), std::abs(n), kGradientFloor});
}

// Compares `analytic` with central differences of `loss` over every entry
// of `value`. `loss` must recompute the objective from scratch.
inline GradientCheck check_gradient(Matrix& value, const Matrix& analytic, const std::function<double()>& loss,
                                    double h = kFiniteDifferenceStep) {
  GradientCheck out;
  for (std::size_t i = 0; i < value.size(); ++i) {
    const double saved = value[i];
    value[i] = saved + h;
    const double up = loss();
    value[i] = saved - h;
    const double down = loss();
    value[i] = saved;
    const double numeric = (up - down) / (2.0 * h);
    const double err = relative_error(analytic[i], numeric);
    if (err >= out.worst) {
      out.worst = err;
      out.entry = i;
      out.analytic = analytic[i];
      out.numeric = numeric;
    }
    ++out.checked;
  }
  return out;
}

inline std::string describe(const GradientCheck& c) {
  return "worst rel err " + std::to_string(c.worst) + " at entry " + std::to_string(c.entry) + " (analytic " +
         std::to_string(c.analytic) + ", numeric " + std::to_string(c.numeric) + ")";
}

}  // namespace dgcl::testing
