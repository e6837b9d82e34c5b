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

#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "nlheat/error.hpp"
#include "nlheat/time_grid.hpp"

namespace nlheat {

enum class SolverMethod { kConjugateGradient, kGradientDescent };

SolverMethod solver_method_from_string(std::string_view name);
std::string_view to_string(SolverMethod method) noexcept;

struct SolverConfig {
  SolverMethod method = SolverMethod::kConjugateGradient;
  double tol = 1e-8;   // relative residual ||H v - b|| / ||b||
  int max_iter = 500;
  double step = 0.0;   // gradient descent only; <= 0 selects 1 / lambda_max(H)
  bool post_mask = false;  // zero the returned control outside the control region
};

/// Throws InvalidArgument on a nonpositive tolerance or iteration budget.
void validate(const SolverConfig& cfg);

using LinearMap = std::function<TimeGridFunction(const TimeGridFunction&)>;

struct IterativeResult {
  TimeGridFunction solution;
  int iterations = 0;
  std::vector<double> residual_history;  // relative residuals, entry 0 = start
  double relative_residual = 0.0;        // recomputed from the returned iterate
};

/// The iteration budget ran out before reaching the tolerance.
class NonConvergence : public Error {
 public:
  NonConvergence(IterativeResult last, double tol);
  const IterativeResult& last() const noexcept { return last_; }

 private:
  IterativeResult last_;
};

/// Solves H x = b for a symmetric positive semi-definite H (b in its range),
/// starting from x = 0. A zero right-hand side returns x = 0 immediately.
IterativeResult solve_spd(const LinearMap& apply_h, const TimeGridFunction& rhs,
                          const SolverConfig& cfg);

/// Largest eigenvalue estimate of H by power iteration.
double estimate_largest_eigenvalue(const LinearMap& apply_h, const TimeGridFunction& start,
                                   int iterations = 30);

}  // namespace nlheat
