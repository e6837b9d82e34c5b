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

#include "nlheat/simd.hpp"

#include <cstdlib>
#include <string>

#include "nlheat/error.hpp"

namespace nlheat::simd {
namespace {

double dot_scalar(const double* x, const double* y, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += x[i] * y[i];
  return acc;
}

void axpy_scalar(double a, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void xpby_scalar(const double* x, double b, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] = x[i] + b * y[i];
}

void scale_scalar(double a, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] *= a;
}

void masked_add_scalar(const double* m, const double* x, double* y,
                       std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += m[i] * x[i];
}

constexpr KernelTable kScalarTable{Isa::kScalar, dot_scalar, axpy_scalar,
                                   xpby_scalar, scale_scalar,
                                   masked_add_scalar};

const KernelTable& select() noexcept {
  if (const char* env = std::getenv("NLHEAT_SIMD")) {
    if (std::string_view(env) == "scalar") return kScalarTable;
  }
  if (const KernelTable* t = avx2_kernels()) return *t;
  if (const KernelTable* t = neon_kernels()) return *t;
  return kScalarTable;
}

void check_sizes(std::size_t a, std::size_t b, const char* what) {
  if (a != b) {
    throw InvalidArgument(std::string(what) + ": length mismatch (" +
                          std::to_string(a) + " vs " + std::to_string(b) +
                          ")");
  }
}

}  // namespace

std::string_view isa_name(Isa isa) noexcept {
  switch (isa) {
    case Isa::kAvx2:
      return "avx2";
    case Isa::kNeon:
      return "neon";
    case Isa::kScalar:
      break;
  }
  return "scalar";
}

const KernelTable& scalar_kernels() noexcept { return kScalarTable; }

const KernelTable& active() noexcept {
  static const KernelTable& table = select();
  return table;
}

double dot(std::span<const double> x, std::span<const double> y) {
  check_sizes(x.size(), y.size(), "dot");
  return active().dot(x.data(), y.data(), x.size());
}

void axpy(double a, std::span<const double> x, std::span<double> y) {
  check_sizes(x.size(), y.size(), "axpy");
  active().axpy(a, x.data(), y.data(), x.size());
}

void xpby(std::span<const double> x, double b, std::span<double> y) {
  check_sizes(x.size(), y.size(), "xpby");
  active().xpby(x.data(), b, y.data(), x.size());
}

void scale(double a, std::span<double> y) {
  active().scale(a, y.data(), y.size());
}

void masked_add(std::span<const double> mask, std::span<const double> x,
                std::span<double> y) {
  check_sizes(mask.size(), x.size(), "masked_add");
  check_sizes(x.size(), y.size(), "masked_add");
  active().masked_add(mask.data(), x.data(), y.data(), x.size());
}

}  // namespace nlheat::simd
