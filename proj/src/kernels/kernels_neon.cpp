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

// AArch64 always carries Advanced SIMD with double-precision lanes, so
// this table needs no runtime probe on that target.

#include <arm_neon.h>

#include "dgcl/kernels.hpp"

namespace dgcl::kernels {
namespace {

constexpr std::size_t kLanes = 2;

double dot_neon(const double* x, const double* y, std::size_t n) {
  const std::size_t body = n - n % kLanes;
  float64x2_t acc = vdupq_n_f64(0.0);
  for (std::size_t i = 0; i < body; i += kLanes) {
    acc = vaddq_f64(acc, vmulq_f64(vld1q_f64(x + i), vld1q_f64(y + i)));
  }
  double result = vgetq_lane_f64(acc, 0) + vgetq_lane_f64(acc, 1);
  for (std::size_t i = body; i < n; ++i) result += x[i] * y[i];
  return result;
}

void axpy_neon(double a, const double* x, double* y, std::size_t n) {
  const float64x2_t va = vdupq_n_f64(a);
  const std::size_t body = n - n % kLanes;
  for (std::size_t i = 0; i < body; i += kLanes) {
    vst1q_f64(y + i, vaddq_f64(vld1q_f64(y + i), vmulq_f64(va, vld1q_f64(x + i))));
  }
  for (std::size_t i = body; i < n; ++i) y[i] += a * x[i];
}

void mul_neon(const double* x, const double* y, double* z, std::size_t n) {
  const std::size_t body = n - n % kLanes;
  for (std::size_t i = 0; i < body; i += kLanes) {
    vst1q_f64(z + i, vmulq_f64(vld1q_f64(x + i), vld1q_f64(y + i)));
  }
  for (std::size_t i = body; i < n; ++i) z[i] = x[i] * y[i];
}

void add_neon(const double* x, const double* y, double* z, std::size_t n) {
  const std::size_t body = n - n % kLanes;
  for (std::size_t i = 0; i < body; i += kLanes) {
    vst1q_f64(z + i, vaddq_f64(vld1q_f64(x + i), vld1q_f64(y + i)));
  }
  for (std::size_t i = body; i < n; ++i) z[i] = x[i] + y[i];
}

double sqdist_neon(const double* x, const double* y, std::size_t n) {
  const std::size_t body = n - n % kLanes;
  float64x2_t acc = vdupq_n_f64(0.0);
  for (std::size_t i = 0; i < body; i += kLanes) {
    const float64x2_t diff = vsubq_f64(vld1q_f64(x + i), vld1q_f64(y + i));
    acc = vaddq_f64(acc, vmulq_f64(diff, diff));
  }
  double result = vgetq_lane_f64(acc, 0) + vgetq_lane_f64(acc, 1);
  for (std::size_t i = body; i < n; ++i) {
    const double diff = x[i] - y[i];
    result += diff * diff;
  }
  return result;
}

}  // namespace

const KernelTable& neon_table() {
  static const KernelTable table{Isa::kNeon, dot_neon, axpy_neon, mul_neon, add_neon, sqdist_neon};
  return table;
}

}  // namespace dgcl::kernels
