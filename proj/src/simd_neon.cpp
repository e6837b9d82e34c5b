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

#if defined(__aarch64__) && defined(__ARM_NEON)
#include <arm_neon.h>
#define NLHEAT_HAVE_NEON 1
#endif

namespace nlheat::simd {

#if defined(NLHEAT_HAVE_NEON)
namespace {

double dot_neon(const double* x, const double* y, std::size_t n) {
  float64x2_t acc0 = vdupq_n_f64(0.0);
  float64x2_t acc1 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc0 = vfmaq_f64(acc0, vld1q_f64(x + i), vld1q_f64(y + i));
    acc1 = vfmaq_f64(acc1, vld1q_f64(x + i + 2), vld1q_f64(y + i + 2));
  }
  double acc = vaddvq_f64(vaddq_f64(acc0, acc1));
  for (; i < n; ++i) acc += x[i] * y[i];
  return acc;
}

void axpy_neon(double a, const double* x, double* y, std::size_t n) {
  const float64x2_t va = vdupq_n_f64(a);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    vst1q_f64(y + i, vaddq_f64(vld1q_f64(y + i), vmulq_f64(va, vld1q_f64(x + i))));
  }
  for (; i < n; ++i) y[i] += a * x[i];
}

void xpby_neon(const double* x, double b, double* y, std::size_t n) {
  const float64x2_t vb = vdupq_n_f64(b);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    vst1q_f64(y + i, vaddq_f64(vld1q_f64(x + i), vmulq_f64(vb, vld1q_f64(y + i))));
  }
  for (; i < n; ++i) y[i] = x[i] + b * y[i];
}

void scale_neon(double a, double* y, std::size_t n) {
  const float64x2_t va = vdupq_n_f64(a);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) vst1q_f64(y + i, vmulq_f64(va, vld1q_f64(y + i)));
  for (; i < n; ++i) y[i] *= a;
}

void masked_add_neon(const double* m, const double* x, double* y,
                     std::size_t n) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    vst1q_f64(y + i, vaddq_f64(vld1q_f64(y + i),
                               vmulq_f64(vld1q_f64(m + i), vld1q_f64(x + i))));
  }
  for (; i < n; ++i) y[i] += m[i] * x[i];
}

constexpr KernelTable kNeonTable{Isa::kNeon, dot_neon, axpy_neon, xpby_neon,
                                 scale_neon, masked_add_neon};

}  // namespace

// NEON is mandatory on aarch64; no runtime probe needed.
const KernelTable* neon_kernels() noexcept { return &kNeonTable; }

#else

const KernelTable* neon_kernels() noexcept { return nullptr; }

#endif

}  // namespace nlheat::simd
