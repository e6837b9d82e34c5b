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

// Space-time mesh on (0,1) x (0,T) and the discrete operators of
//
//   y_t - nu y_xx + K1(x) \int_0^1 K2(s) y(s,t) ds = 1_O v,   y = 0 on the boundary.
//
// The operator A_h = A_D + u w^T is a constant-coefficient tridiagonal
// Laplacian plus a rank-one kernel part; it is never densified on solve paths.

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string_view>
#include <vector>

namespace nlheat {

struct Grid {
  int n_interior = 0;  // N
  int n_steps = 0;     // M
  double h = 0.0;      // 1 / (N + 1)
  double dt = 0.0;     // T / M
  double horizon = 0.0;
  double nu = 0.0;

  std::size_t size() const noexcept { return static_cast<std::size_t>(n_interior); }
  std::size_t steps() const noexcept { return static_cast<std::size_t>(n_steps); }

  /// Coordinate of interior node i, 1 <= i <= N.
  double x(int i) const noexcept { return i * h; }
  /// Time level n, 0 <= n <= M.
  double t(int n) const noexcept { return n * dt; }

  /// Interior node coordinates x_1..x_N.
  std::vector<double> nodes() const;

  friend bool operator==(const Grid&, const Grid&) = default;
};

/// Throws InvalidArgument unless n_interior >= 1, n_steps >= 1, horizon > 0
/// and nu >= 0.
Grid build_grid(int n_interior, int n_steps, double horizon, double nu);

using ScalarFunction = std::function<double(double)>;

/// Factors of a separated kernel K(x, s) = K1(x) K2(s).
struct KernelFunctions {
  ScalarFunction k1;
  ScalarFunction k2;
};

/// K1(x) = sin(5 pi x), K2(s) = 20 1_(0,0.5)(s) sin(pi s).
KernelFunctions paper_kernel();
KernelFunctions zero_kernel();
KernelFunctions constant_kernel(double c);

/// Resolves "paper", "zero" or "constant(c)". Throws InvalidArgument for
/// anything else.
KernelFunctions kernel_by_name(std::string_view name);

/// Nodal samples of the kernel factors.
struct SeparatedKernel {
  std::vector<double> k1;  // K1(x_i)
  std::vector<double> k2;  // K2(x_i)
};

/// Samples both factors pointwise at the interior nodes. Throws
/// InvalidKernel on a non-finite sample.
SeparatedKernel sample_kernel(const ScalarFunction& k1, const ScalarFunction& k2,
                              const Grid& grid);
SeparatedKernel sample_kernel(const KernelFunctions& kernel, const Grid& grid);

/// Validates externally supplied samples (length N, all finite).
SeparatedKernel kernel_from_samples(std::vector<double> k1, std::vector<double> k2,
                                    const Grid& grid);

class NonlocalOperator {
 public:
  NonlocalOperator(std::vector<double> diag, std::vector<double> sub,
                   std::vector<double> sup, std::vector<double> u,
                   std::vector<double> w);

  std::size_t size() const noexcept { return diag_.size(); }

  std::span<const double> diag() const noexcept { return diag_; }
  std::span<const double> sub() const noexcept { return sub_; }
  std::span<const double> sup() const noexcept { return sup_; }
  std::span<const double> u() const noexcept { return u_; }
  std::span<const double> w() const noexcept { return w_; }

  /// out = A_h y
  void apply(std::span<const double> y, std::span<double> out) const;
  /// out = A_h^T y
  void apply_transpose(std::span<const double> y, std::span<double> out) const;

  std::vector<double> apply(std::span<const double> y) const;
  std::vector<double> apply_transpose(std::span<const double> y) const;

  /// The transposed operator: A_D^T + w u^T.
  NonlocalOperator transposed() const;

  /// Row-major dense N x N copy. Verification only; O(N^2).
  std::vector<double> materialize() const;

 private:
  void apply_impl(std::span<const double> y, std::span<double> out,
                  bool transpose) const;

  std::vector<double> diag_;
  std::vector<double> sub_;  // sub_[i] = A(i+1, i)
  std::vector<double> sup_;  // sup_[i] = A(i, i+1)
  std::vector<double> u_;
  std::vector<double> w_;
};

/// A_D = (nu / h^2) tridiag(-1, 2, -1); u = k1, w = h k2.
NonlocalOperator assemble_operator(const Grid& grid, const SeparatedKernel& kernel);

/// Diagonal 0/1 restriction to the nodes strictly inside (a, b).
class ControlOperator {
 public:
  explicit ControlOperator(std::vector<std::uint8_t> mask);

  std::size_t size() const noexcept { return mask_.size(); }
  std::size_t active_count() const noexcept;
  bool contains(std::size_t i) const noexcept { return mask_[i] != 0; }

  /// 0/1 weights as doubles, suitable for the vector kernels.
  std::span<const double> weights() const noexcept { return weights_; }

  void apply(std::span<const double> y, std::span<double> out) const;
  void apply_in_place(std::span<double> y) const;
  std::vector<double> apply(std::span<const double> y) const;

 private:
  std::vector<std::uint8_t> mask_;
  std::vector<double> weights_;
};

/// Throws InvalidArgument unless 0 <= a < b <= 1 and EmptyControlRegion if no
/// node satisfies a < x_i < b.
ControlOperator assemble_control(const Grid& grid, double a, double b);

}  // namespace nlheat
