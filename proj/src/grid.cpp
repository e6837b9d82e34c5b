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

#include "nlheat/grid.hpp"

#include <charconv>
#include <cmath>
#include <numbers>
#include <string>

#include "nlheat/error.hpp"
#include "nlheat/simd.hpp"

namespace nlheat {

std::vector<double> Grid::nodes() const {
  std::vector<double> xs(size());
  for (int i = 1; i <= n_interior; ++i) xs[i - 1] = x(i);
  return xs;
}

Grid build_grid(int n_interior, int n_steps, double horizon, double nu) {
  if (n_interior < 1) throw InvalidArgument("grid: N must be >= 1");
  if (n_steps < 1) throw InvalidArgument("grid: M must be >= 1");
  if (!(horizon > 0.0) || !std::isfinite(horizon)) {
    throw InvalidArgument("grid: horizon T must be positive");
  }
  if (!(nu >= 0.0) || !std::isfinite(nu)) {
    throw InvalidArgument("grid: diffusion nu must be nonnegative");
  }
  Grid g;
  g.n_interior = n_interior;
  g.n_steps = n_steps;
  g.h = 1.0 / (n_interior + 1);
  g.dt = horizon / n_steps;
  g.horizon = horizon;
  g.nu = nu;
  return g;
}

KernelFunctions paper_kernel() {
  using std::numbers::pi;
  return {[](double x) { return std::sin(5.0 * pi * x); },
          [](double s) { return (s > 0.0 && s < 0.5) ? 20.0 * std::sin(pi * s) : 0.0; }};
}

KernelFunctions zero_kernel() {
  return {[](double) { return 0.0; }, [](double) { return 0.0; }};
}

KernelFunctions constant_kernel(double c) {
  // K(x, s) = c, split as c * 1.
  return {[c](double) { return c; }, [](double) { return 1.0; }};
}

KernelFunctions kernel_by_name(std::string_view name) {
  if (name == "paper") return paper_kernel();
  if (name == "zero") return zero_kernel();
  constexpr std::string_view prefix = "constant(";
  if (name.starts_with(prefix) && name.ends_with(")")) {
    auto arg = name.substr(prefix.size(), name.size() - prefix.size() - 1);
    double c = 0.0;
    auto [ptr, ec] = std::from_chars(arg.data(), arg.data() + arg.size(), c);
    if (ec == std::errc() && ptr == arg.data() + arg.size() && std::isfinite(c)) {
      return constant_kernel(c);
    }
  }
  throw InvalidArgument("unknown kernel '" + std::string(name) + "'");
}

namespace {

void require_finite(std::span<const double> v, const char* which) {
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!std::isfinite(v[i])) {
      throw InvalidKernel(std::string("kernel factor ") + which +
                          " is not finite at node " + std::to_string(i + 1));
    }
  }
}

}  // namespace

SeparatedKernel sample_kernel(const ScalarFunction& k1, const ScalarFunction& k2,
                              const Grid& grid) {
  SeparatedKernel k;
  k.k1.resize(grid.size());
  k.k2.resize(grid.size());
  for (int i = 1; i <= grid.n_interior; ++i) {
    k.k1[i - 1] = k1(grid.x(i));
    k.k2[i - 1] = k2(grid.x(i));
  }
  require_finite(k.k1, "K1");
  require_finite(k.k2, "K2");
  return k;
}

SeparatedKernel sample_kernel(const KernelFunctions& kernel, const Grid& grid) {
  return sample_kernel(kernel.k1, kernel.k2, grid);
}

SeparatedKernel kernel_from_samples(std::vector<double> k1, std::vector<double> k2,
                                    const Grid& grid) {
  if (k1.size() != grid.size() || k2.size() != grid.size()) {
    throw InvalidArgument("kernel samples must have length N = " +
                          std::to_string(grid.size()));
  }
  require_finite(k1, "K1");
  require_finite(k2, "K2");
  return {std::move(k1), std::move(k2)};
}

NonlocalOperator::NonlocalOperator(std::vector<double> diag, std::vector<double> sub,
                                   std::vector<double> sup, std::vector<double> u,
                                   std::vector<double> w)
    : diag_(std::move(diag)),
      sub_(std::move(sub)),
      sup_(std::move(sup)),
      u_(std::move(u)),
      w_(std::move(w)) {
  const std::size_t n = diag_.size();
  if (n == 0 || sub_.size() != n - 1 || sup_.size() != n - 1 || u_.size() != n ||
      w_.size() != n) {
    throw InvalidArgument("nonlocal operator: inconsistent band/rank-one sizes");
  }
}

void NonlocalOperator::apply_impl(std::span<const double> y, std::span<double> out,
                                  bool transpose) const {
  const std::size_t n = size();
  if (y.size() != n || out.size() != n) {
    throw InvalidArgument("nonlocal operator: vector length mismatch");
  }
  if (y.data() == out.data()) {
    throw InvalidArgument("nonlocal operator: input and output must not alias");
  }
  // (A y)_i = sub_{i-1} y_{i-1} + diag_i y_i + sup_i y_{i+1}; transposition
  // swaps the two off-diagonals.
  const auto& lower = transpose ? sup_ : sub_;
  const auto& upper = transpose ? sub_ : sup_;
  for (std::size_t i = 0; i < n; ++i) {
    double acc = diag_[i] * y[i];
    if (i > 0) acc += lower[i - 1] * y[i - 1];
    if (i + 1 < n) acc += upper[i] * y[i + 1];
    out[i] = acc;
  }
  const auto& left = transpose ? w_ : u_;
  const auto& right = transpose ? u_ : w_;
  simd::axpy(simd::dot(right, y), left, out);
}

void NonlocalOperator::apply(std::span<const double> y, std::span<double> out) const {
  apply_impl(y, out, false);
}

void NonlocalOperator::apply_transpose(std::span<const double> y,
                                       std::span<double> out) const {
  apply_impl(y, out, true);
}

std::vector<double> NonlocalOperator::apply(std::span<const double> y) const {
  std::vector<double> out(size());
  apply(y, out);
  return out;
}

std::vector<double> NonlocalOperator::apply_transpose(std::span<const double> y) const {
  std::vector<double> out(size());
  apply_transpose(y, out);
  return out;
}

NonlocalOperator NonlocalOperator::transposed() const {
  return NonlocalOperator(diag_, sup_, sub_, w_, u_);
}

std::vector<double> NonlocalOperator::materialize() const {
  const std::size_t n = size();
  std::vector<double> a(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    a[i * n + i] = diag_[i];
    if (i > 0) a[i * n + i - 1] = sub_[i - 1];
    if (i + 1 < n) a[i * n + i + 1] = sup_[i];
    for (std::size_t j = 0; j < n; ++j) a[i * n + j] += u_[i] * w_[j];
  }
  return a;
}

NonlocalOperator assemble_operator(const Grid& grid, const SeparatedKernel& kernel) {
  const std::size_t n = grid.size();
  if (kernel.k1.size() != n || kernel.k2.size() != n) {
    throw InvalidArgument("assemble_operator: kernel sampled on a different grid (" +
                          std::to_string(kernel.k1.size()) + " nodes, expected " +
                          std::to_string(n) + ")");
  }
  const double c = grid.nu / (grid.h * grid.h);
  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i) w[i] = grid.h * kernel.k2[i];
  return NonlocalOperator(std::vector<double>(n, 2.0 * c), std::vector<double>(n - 1, -c),
                          std::vector<double>(n - 1, -c), kernel.k1, std::move(w));
}

ControlOperator::ControlOperator(std::vector<std::uint8_t> mask)
    : mask_(std::move(mask)), weights_(mask_.size()) {
  for (std::size_t i = 0; i < mask_.size(); ++i) weights_[i] = mask_[i] ? 1.0 : 0.0;
}

std::size_t ControlOperator::active_count() const noexcept {
  std::size_t count = 0;
  for (auto m : mask_) count += m ? 1 : 0;
  return count;
}

void ControlOperator::apply(std::span<const double> y, std::span<double> out) const {
  if (y.size() != size() || out.size() != size()) {
    throw InvalidArgument("control operator: vector length mismatch");
  }
  for (std::size_t i = 0; i < size(); ++i) out[i] = mask_[i] ? y[i] : 0.0;
}

void ControlOperator::apply_in_place(std::span<double> y) const { apply(y, y); }

std::vector<double> ControlOperator::apply(std::span<const double> y) const {
  std::vector<double> out(size());
  apply(y, out);
  return out;
}

ControlOperator assemble_control(const Grid& grid, double a, double b) {
  if (!(0.0 <= a && a < b && b <= 1.0)) {
    throw InvalidArgument("control region (a, b) must satisfy 0 <= a < b <= 1");
  }
  std::vector<std::uint8_t> mask(grid.size());
  bool any = false;
  for (int i = 1; i <= grid.n_interior; ++i) {
    const double x = grid.x(i);
    mask[i - 1] = (a < x && x < b) ? 1 : 0;
    any = any || mask[i - 1];
  }
  if (!any) {
    throw EmptyControlRegion("control region (" + std::to_string(a) + ", " +
                             std::to_string(b) + ") contains no grid node");
  }
  return ControlOperator(std::move(mask));
}

}  // namespace nlheat
