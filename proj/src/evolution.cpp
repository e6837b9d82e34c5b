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

#include "nlheat/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "nlheat/error.hpp"
#include "nlheat/simd.hpp"

namespace nlheat {
namespace {

void require_grid(const DiscreteSystem& sys, const TimeGridFunction& f, const char* what) {
  if (f.steps() != sys.grid.steps() || f.nodes() != sys.grid.size()) {
    throw InvalidArgument(std::string(what) + ": expected " +
                          std::to_string(sys.grid.steps()) + "x" +
                          std::to_string(sys.grid.size()) + " time-grid function, got " +
                          std::to_string(f.steps()) + "x" + std::to_string(f.nodes()));
  }
}

void require_weights(double beta, double gamma) {
  if (!(beta > 0.0) || !std::isfinite(beta)) throw InvalidArgument("beta must be positive");
  if (!(gamma > 0.0) || !std::isfinite(gamma)) {
    throw InvalidArgument("gamma must be positive");
  }
}

// Forward march with an optional controlled source. `v == nullptr` means no
// source.
Trajectory march_forward(const DiscreteSystem& sys, const TimeGridFunction* v,
                         std::span<const double> y0) {
  const std::size_t n = sys.grid.size();
  const std::size_t m = sys.grid.steps();
  if (y0.size() != n) {
    throw InvalidArgument("solve_forward: initial datum has length " +
                          std::to_string(y0.size()) + ", expected " + std::to_string(n));
  }
  std::vector<double> states((m + 1) * n);
  std::copy(y0.begin(), y0.end(), states.begin());
  const double inv_dt = 1.0 / sys.grid.dt;
  for (std::size_t k = 0; k < m; ++k) {
    std::span<const double> prev(states.data() + k * n, n);
    std::span<double> next(states.data() + (k + 1) * n, n);
    std::copy(prev.begin(), prev.end(), next.begin());
    simd::scale(inv_dt, next);
    if (v != nullptr) simd::masked_add(sys.control.weights(), v->slice(k), next);
    sys.stepper.solve(next, next, Transpose::kNo);
  }
  return Trajectory(sys.grid, std::move(states));
}

}  // namespace

DiscreteSystem make_system(const Grid& grid, const SeparatedKernel& kernel,
                           ControlOperator control, LinearSolverKind kind) {
  if (control.size() != grid.size()) {
    throw InvalidArgument("make_system: control operator size does not match grid");
  }
  NonlocalOperator op = assemble_operator(grid, kernel);
  StepSolver stepper(op, grid.dt, kind);
  return DiscreteSystem{grid, std::move(op), std::move(control), std::move(stepper)};
}

Trajectory solve_forward(const DiscreteSystem& sys, const TimeGridFunction& v,
                         std::span<const double> y0) {
  require_grid(sys, v, "solve_forward");
  return march_forward(sys, &v, y0);
}

Trajectory solve_free(const DiscreteSystem& sys, std::span<const double> y0) {
  return march_forward(sys, nullptr, y0);
}

TimeGridFunction solve_backward(const DiscreteSystem& sys, const TimeGridFunction& z) {
  require_grid(sys, z, "solve_backward");
  const std::size_t m = sys.grid.steps();
  const double inv_dt = 1.0 / sys.grid.dt;
  TimeGridFunction p(sys.grid);
  for (std::size_t k = m; k-- > 0;) {
    auto cur = p.slice(k);
    if (k + 1 < m) {
      auto next = p.slice(k + 1);
      std::copy(next.begin(), next.end(), cur.begin());
      simd::scale(inv_dt, cur);
    }
    simd::axpy(1.0, z.slice(k), cur);
    sys.stepper.solve(cur, cur, Transpose::kYes);
  }
  return p;
}

XiResult solve_xi(const DiscreteSystem& sys, const TimeGridFunction& y) {
  TimeGridFunction xi = solve_backward(sys, y);
  std::vector<double> xi1(xi.slice(0).begin(), xi.slice(0).end());
  return {std::move(xi1), std::move(xi)};
}

TimeGridFunction apply_S(const DiscreteSystem& sys, const TimeGridFunction& v) {
  std::vector<double> zero(sys.grid.size(), 0.0);
  return solve_forward(sys, v, zero).tail();
}

TimeGridFunction apply_S_star(const DiscreteSystem& sys, const TimeGridFunction& z) {
  TimeGridFunction p = solve_backward(sys, z);
  for (std::size_t k = 0; k < p.steps(); ++k) sys.control.apply_in_place(p.slice(k));
  return p;
}

double x_inner(const XElement& a, const XElement& b) {
  return spatial_inner(a.second.grid(), a.first, b.first) + inner(a.second, b.second);
}

XElement apply_R(const DiscreteSystem& sys, const TimeGridFunction& v, double beta,
                 double gamma) {
  require_weights(beta, gamma);
  TimeGridFunction y = apply_S(sys, v);
  XiResult xi = solve_xi(sys, y);
  simd::scale(std::sqrt(beta / gamma), xi.xi1);
  return {std::move(xi.xi1), std::move(y)};
}

TimeGridFunction apply_R_star(const DiscreteSystem& sys,
                              std::span<const double> scaled_sigma0,
                              const TimeGridFunction& f, double beta, double gamma) {
  require_weights(beta, gamma);
  require_grid(sys, f, "apply_R_star");
  if (scaled_sigma0.size() != sys.grid.size()) {
    throw InvalidArgument("apply_R_star: first slot must have length N");
  }
  // sigma^0 = -(beta/gamma) sigma_0 = -sqrt(beta/gamma) * (sqrt(beta/gamma) sigma_0)
  std::vector<double> sigma0(scaled_sigma0.begin(), scaled_sigma0.end());
  simd::scale(-std::sqrt(beta / gamma), sigma0);
  TimeGridFunction source = f - solve_free(sys, sigma0).tail();
  return apply_S_star(sys, source);
}

}  // namespace nlheat
