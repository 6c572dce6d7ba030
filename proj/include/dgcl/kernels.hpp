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
#include <string_view>
#include <vector>

namespace dgcl::kernels {

// Instruction sets a kernel table can be built for. Scalar is always
// present and is the reference every other variant is tested against.
enum class Isa { kScalar, kAvx2, kNeon };

std::string_view isa_name(Isa isa);

// Flat inner loops over contiguous double arrays.
//
// The element-wise kernels (axpy, mul, add) perform the same rounding
// sequence in every variant, so their results are bit-identical across
// ISAs. The reductions (dot, sqdist) use lane-parallel partial sums and
// agree with the scalar reference only up to reassociation.
struct KernelTable {
  Isa isa;
  // sum_i x[i] * y[i]
  double (*dot)(const double* x, const double* y, std::size_t n);
  // y[i] += a * x[i]
  void (*axpy)(double a, const double* x, double* y, std::size_t n);
  // z[i] = x[i] * y[i]
  void (*mul)(const double* x, const double* y, double* z, std::size_t n);
  // z[i] = x[i] + y[i]
  void (*add)(const double* x, const double* y, double* z, std::size_t n);
  // sum_i (x[i] - y[i])^2
  double (*sqdist)(const double* x, const double* y, std::size_t n);
};

const KernelTable& scalar_table();
#if defined(DGCL_HAVE_AVX2)
const KernelTable& avx2_table();
#endif
#if defined(DGCL_HAVE_NEON)
const KernelTable& neon_table();
#endif

// ISAs compiled into this binary and supported by the running CPU.
std::vector<Isa> available_isas();

const KernelTable& table_for(Isa isa);

// The table used by the library. Chosen once at startup from the best
// available ISA; DGCL_FORCE_SCALAR=1 in the environment pins the scalar path.
const KernelTable& active();

// Overrides the runtime choice. Throws std::invalid_argument if the ISA is
// not available on this machine.
void select(Isa isa);

inline double dot(const double* x, const double* y, std::size_t n) { return active().dot(x, y, n); }
inline void axpy(double a, const double* x, double* y, std::size_t n) { active().axpy(a, x, y, n); }
inline void mul(const double* x, const double* y, double* z, std::size_t n) { active().mul(x, y, z, n); }
inline void add(const double* x, const double* y, double* z, std::size_t n) { active().add(x, y, z, n); }
inline double sqdist(const double* x, const double* y, std::size_t n) { return active().sqdist(x, y, n); }

}  // namespace dgcl::kernels
