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

#include "nlheat/step_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include "nlheat/error.hpp"
#include "nlheat/simd.hpp"

namespace nlheat {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

void lu_factor(std::vector<double>& a, std::vector<std::size_t>& piv, std::size_t n) {
  piv.resize(n);
  double scale = 0.0;
  for (double v : a) scale = std::max(scale, std::abs(v));
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    double best = std::abs(a[k * n + k]);
    for (std::size_t i = k + 1; i < n; ++i) {
      if (std::abs(a[i * n + k]) > best) {
        best = std::abs(a[i * n + k]);
        p = i;
      }
    }
    if (best <= kEps * scale * n) {
      throw SingularOperator("dense step matrix is singular");
    }
    piv[k] = p;
    if (p != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a[k * n + j], a[p * n + j]);
    }
    const double inv = 1.0 / a[k * n + k];
    for (std::size_t i = k + 1; i < n; ++i) {
      const double l = a[i * n + k] * inv;
      a[i * n + k] = l;
      if (l == 0.0) continue;
      for (std::size_t j = k + 1; j < n; ++j) a[i * n + j] -= l * a[k * n + j];
    }
  }
}

void lu_solve(const std::vector<double>& lu, const std::vector<std::size_t>& piv,
              std::span<double> x) {
  const std::size_t n = x.size();
  for (std::size_t k = 0; k < n; ++k) {
    if (piv[k] != k) std::swap(x[k], x[piv[k]]);
    for (std::size_t i = k + 1; i < n; ++i) x[i] -= lu[i * n + k] * x[k];
  }
  for (std::size_t k = n; k-- > 0;) {
    double acc = x[k];
    for (std::size_t j = k + 1; j < n; ++j) acc -= lu[k * n + j] * x[j];
    x[k] = acc / lu[k * n + k];
  }
}

}  // namespace

LinearSolverKind linear_solver_from_string(std::string_view name) {
  if (name == "structured") return LinearSolverKind::kStructured;
  if (name == "dense") return LinearSolverKind::kDense;
  throw InvalidArgument("unknown linear solver '" + std::string(name) +
                        "' (expected structured|dense)");
}

std::string_view to_string(LinearSolverKind kind) noexcept {
  return kind == LinearSolverKind::kDense ? "dense" : "structured";
}

StepSolver::StepSolver(const NonlocalOperator& op, double dt, LinearSolverKind kind)
    : n_(op.size()), dt_(dt), kind_(kind) {
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw InvalidArgument("step solver: dt must be positive");
  }
  const double shift = 1.0 / dt;

  if (kind_ == LinearSolverKind::kDense) {
    lu_ = op.materialize();
    for (std::size_t i = 0; i < n_; ++i) lu_[i * n_ + i] += shift;
    lu_t_.resize(n_ * n_);
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j) lu_t_[j * n_ + i] = lu_[i * n_ + j];
    lu_factor(lu_, piv_, n_);
    lu_factor(lu_t_, piv_t_, n_);
    return;
  }

  for (std::size_t i = 0; i + 1 < n_; ++i) {
    if (op.sub()[i] != op.sup()[i]) {
      throw InvalidArgument("step solver: diffusion part must be symmetric");
    }
  }
  sub_.assign(op.sub().begin(), op.sub().end());
  inv_piv_.resize(n_);
  c_prime_.resize(n_ > 0 ? n_ - 1 : 0);
  double piv = op.diag()[0] + shift;
  for (std::size_t i = 0;; ++i) {
    if (std::abs(piv) <= kEps * (std::abs(op.diag()[i]) + shift)) {
      throw SingularOperator("step solver: zero pivot in tridiagonal factor at row " +
                             std::to_string(i + 1));
    }
    inv_piv_[i] = 1.0 / piv;
    if (i + 1 == n_) break;
    c_prime_[i] = sub_[i] * inv_piv_[i];
    piv = op.diag()[i + 1] + shift - sub_[i] * c_prime_[i];
  }

  u_.assign(op.u().begin(), op.u().end());
  w_.assign(op.w().begin(), op.w().end());
  s_fwd_ = u_;
  thomas(s_fwd_);
  s_adj_ = w_;
  thomas(s_adj_);
  denom_ = 1.0 + simd::dot(w_, s_fwd_);
  const double scale = 1.0 + std::sqrt(simd::dot(w_, w_) * simd::dot(s_fwd_, s_fwd_));
  if (!std::isfinite(denom_) || std::abs(denom_) <= 64.0 * kEps * scale) {
    throw SingularOperator("step solver: Sherman-Morrison denominator vanishes");
  }
}

void StepSolver::thomas(std::span<double> x) const {
  x[0] *= inv_piv_[0];
  for (std::size_t i = 1; i < n_; ++i) {
    x[i] = (x[i] - sub_[i - 1] * x[i - 1]) * inv_piv_[i];
  }
  for (std::size_t i = n_ - 1; i-- > 0;) x[i] -= c_prime_[i] * x[i + 1];
}

void StepSolver::dense_solve(std::span<double> x, Transpose transpose) const {
  if (transpose == Transpose::kYes) {
    lu_solve(lu_t_, piv_t_, x);
  } else {
    lu_solve(lu_, piv_, x);
  }
}

void StepSolver::solve(std::span<const double> rhs, std::span<double> out,
                       Transpose transpose) const {
  if (rhs.size() != n_ || out.size() != n_) {
    throw InvalidArgument("step solver: expected vectors of length " + std::to_string(n_));
  }
  for (double r : rhs) {
    if (!std::isfinite(r)) throw InvalidArgument("step solver: non-finite right-hand side");
  }
  if (out.data() != rhs.data()) std::copy(rhs.begin(), rhs.end(), out.begin());

  if (kind_ == LinearSolverKind::kDense) {
    dense_solve(out, transpose);
    return;
  }
  // (T + a b^T)^{-1} r = T^{-1} r - s (b^T T^{-1} r) / (1 + b^T s), s = T^{-1} a
  thomas(out);
  const bool adj = transpose == Transpose::kYes;
  const auto& b = adj ? u_ : w_;
  const auto& s = adj ? s_adj_ : s_fwd_;
  simd::axpy(-simd::dot(b, out) / denom_, s, out);
}

std::vector<double> StepSolver::solve(std::span<const double> rhs, Transpose transpose) const {
  std::vector<double> out(rhs.size());
  solve(rhs, out, transpose);
  return out;
}

}  // namespace nlheat
