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

// Compiled with -mavx2 only. The dispatcher never hands this table out
// unless the CPU reports AVX2 support.

#include <immintrin.h>

#include "dgcl/kernels.hpp"

namespace dgcl::kernels {
namespace {

constexpr std::size_t kLanes = 4;

double hsum(__m256d v) {
  alignas(32) double lanes[kLanes];
  _mm256_store_pd(lanes, v);
  return (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
}

double dot_avx2(const double* x, const double* y, std::size_t n) {
  const std::size_t rounds = n / (2 * kLanes);
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  for (std::size_t r = 0; r < rounds; ++r) {
    const std::size_t i = r * 2 * kLanes;
    acc0 = _mm256_add_pd(acc0, _mm256_mul_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
    acc1 = _mm256_add_pd(acc1, _mm256_mul_pd(_mm256_loadu_pd(x + i + kLanes), _mm256_loadu_pd(y + i + kLanes)));
  }
  double result = hsum(_mm256_add_pd(acc0, acc1));
  for (std::size_t i = rounds * 2 * kLanes; i < n; ++i) result += x[i] * y[i];
  return result;
}

void axpy_avx2(double a, const double* x, double* y, std::size_t n) {
  const __m256d va = _mm256_set1_pd(a);
  const std::size_t body = n - n % kLanes;
  for (std::size_t i = 0; i < body; i += kLanes) {
    const __m256d prod = _mm256_mul_pd(va, _mm256_loadu_pd(x + i));
    _mm256_storeu_pd(y + i, _mm256_add_pd(_mm256_loadu_pd(y + i), prod));
  }
  for (std::size_t i = body; i < n; ++i) y[i] += a * x[i];
}

void mul_avx2(const double* x, const double* y, double* z, std::size_t n) {
  const std::size_t body = n - n % kLanes;
  for (std::size_t i = 0; i < body; i += kLanes) {
    _mm256_storeu_pd(z + i, _mm256_mul_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
  }
  for (std::size_t i = body; i < n; ++i) z[i] = x[i] * y[i];
}

void add_avx2(const double* x, const double* y, double* z, std::size_t n) {
  const std::size_t body = n - n % kLanes;
  for (std::size_t i = 0; i < body; i += kLanes) {
    _mm256_storeu_pd(z + i, _mm256_add_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
  }
  for (std::size_t i = body; i < n; ++i) z[i] = x[i] + y[i];
}

double sqdist_avx2(const double* x, const double* y, std::size_t n) {
  const std::size_t body = n - n % kLanes;
  __m256d acc = _mm256_setzero_pd();
  for (std::size_t i = 0; i < body; i += kLanes) {
    const __m256d diff = _mm256_sub_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i));
    acc = _mm256_add_pd(acc, _mm256_mul_pd(diff, diff));
  }
  double result = hsum(acc);
  for (std::size_t i = body; i < n; ++i) {
    const double diff = x[i] - y[i];
    result += diff * diff;
  }
  return result;
}

}  // namespace

const KernelTable& avx2_table() {
  static const KernelTable table{Isa::kAvx2, dot_avx2, axpy_avx2, mul_avx2, add_avx2, sqdist_avx2};
  return table;
}

}  // namespace dgcl::kernels
