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

#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "nlheat/grid.hpp"

namespace nlheat {

enum class LinearSolverKind {
  kStructured,  // Thomas + Sherman-Morrison, O(N) per solve
  kDense,       // partial-pivot LU of the materialized matrix, O(N^2) per solve
};

LinearSolverKind linear_solver_from_string(std::string_view name);
std::string_view to_string(LinearSolverKind kind) noexcept;

enum class Transpose : bool { kNo = false, kYes = true };

/// Solves ((1/dt) I + A) x = r for A = A_h or A_h^T.
///
/// Factorization happens once at construction. Instances are immutable and
/// solve() touches only the caller's output buffer, so one solver can be
/// shared between threads.
class StepSolver {
 public:
  /// Throws InvalidArgument if dt <= 0 and SingularOperator when a Thomas
  /// pivot or the Sherman-Morrison denominator 1 + w^T T^{-1} u vanishes.
  StepSolver(const NonlocalOperator& op, double dt,
             LinearSolverKind kind = LinearSolverKind::kStructured);

  std::size_t size() const noexcept { return n_; }
  double dt() const noexcept { return dt_; }
  LinearSolverKind kind() const noexcept { return kind_; }

  /// out may alias rhs. Throws InvalidArgument on a length mismatch or a
  /// non-finite right-hand side.
  void solve(std::span<const double> rhs, std::span<double> out,
             Transpose transpose = Transpose::kNo) const;
  std::vector<double> solve(std::span<const double> rhs,
                            Transpose transpose = Transpose::kNo) const;

  /// Sherman-Morrison denominator 1 + w^T T^{-1} u (same for both
  /// orientations since T is symmetric).
  double coupling_denominator() const noexcept { return denom_; }

 private:
  void thomas(std::span<double> x) const;
  void dense_solve(std::span<double> x, Transpose transpose) const;

  std::size_t n_ = 0;
  double dt_ = 0.0;
  LinearSolverKind kind_;

  // Thomas factorization of T = (1/dt) I + A_D. The diffusion part is
  // symmetric, so the same factors serve both orientations.
  std::vector<double> sub_;      // T(i+1, i)
  std::vector<double> inv_piv_;  // 1 / modified pivots
  std::vector<double> c_prime_;  // modified super-diagonal

  std::vector<double> u_;
  std::vector<double> w_;
  std::vector<double> s_fwd_;  // T^{-1} u
  std::vector<double> s_adj_;  // T^{-1} w
  double denom_ = 1.0;

  // Dense fallback: LU of (1/dt) I + A_h with row pivots, and of its
  // transpose.
  std::vector<double> lu_;
  std::vector<std::size_t> piv_;
  std::vector<double> lu_t_;
  std::vector<std::size_t> piv_t_;
};

}  // namespace nlheat
