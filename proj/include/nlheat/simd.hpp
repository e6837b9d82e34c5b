/*
 Copyright 2026 The nlheat Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/

// Dense vector kernels used by the solvers.
//
// Every kernel has a scalar reference implementation and, where the target
// supports it, an AVX2+FMA (x86-64) or NEON (aarch64) variant. The variant is
// chosen once at first use from the CPU's capabilities; setting the
// environment variable NLHEAT_SIMD=scalar forces the reference path.
//
// Reductions (dot) in the vector variants accumulate in several lanes, so
// they agree with the scalar path only up to rounding. Element-wise kernels
// are bit-identical across variants when FMA contraction is not involved.

#pragma once

#include <cstddef>
#include <span>
#include <string_view>

namespace nlheat::simd {

enum class Isa { kScalar, kAvx2, kNeon };

std::string_view isa_name(Isa isa) noexcept;

/// Table of kernel entry points for one instruction set.
struct KernelTable {
  Isa isa;
  double (*dot)(const double* x, const double* y, std::size_t n);
  // y += a * x
  void (*axpy)(double a, const double* x, double* y, std::size_t n);
  // y = x + b * y
  void (*xpby)(const double* x, double b, double* y, std::size_t n);
  // y = a * y
  void (*scale)(double a, double* y, std::size_t n);
  // y += m (elementwise) x
  void (*masked_add)(const double* m, const double* x, double* y,
                     std::size_t n);
};

const KernelTable& scalar_kernels() noexcept;
/// nullptr when the variant was not compiled in or the CPU lacks support.
const KernelTable* avx2_kernels() noexcept;
const KernelTable* neon_kernels() noexcept;

/// The table selected for this process.
const KernelTable& active() noexcept;

double dot(std::span<const double> x, std::span<const double> y);
void axpy(double a, std::span<const double> x, std::span<double> y);
void xpby(std::span<const double> x, double b, std::span<double> y);
void scale(double a, std::span<double> y);
void masked_add(std::span<const double> mask, std::span<const double> x,
                std::span<double> y);

}  // namespace nlheat::simd
