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

// Implicit Euler time marching for the state and adjoint systems, and the
// four linear space-time maps built from them:
//
//   S  v       = (y^1..y^M)            forward, y^0 = 0, source B v
//   S* z       = B p                   p backward from p^{M+1} = 0, source z
//   R  v       = (sqrt(b/g) xi^1, y)   y = S v, then xi backward with source y
//   R* (s0, f) = B p                   sigma forward from -sqrt(b/g) s0, then
//                                      p backward with source f - sigma
//
// S* and R* are the exact adjoints of S and R for the discrete L^2 products
// (see time_grid.hpp); on X = R^N x L^2_dt the first slot carries h (., .).

#pragma once

#include <span>
#include <vector>

#include "nlheat/grid.hpp"
#include "nlheat/step_solver.hpp"
#include "nlheat/time_grid.hpp"

namespace nlheat {

/// Everything the time marchers need, assembled once and shared read-only.
struct DiscreteSystem {
  Grid grid;
  NonlocalOperator op;
  ControlOperator control;
  StepSolver stepper;
};

DiscreteSystem make_system(const Grid& grid, const SeparatedKernel& kernel,
                           ControlOperator control,
                           LinearSolverKind kind = LinearSolverKind::kStructured);

/// y^{n+1} = ((1/dt) I + A_h)^{-1} (y^n / dt + B v^{n+1}), y^0 = y0.
Trajectory solve_forward(const DiscreteSystem& sys, const TimeGridFunction& v,
                         std::span<const double> y0);

/// Uncontrolled evolution from y0.
Trajectory solve_free(const DiscreteSystem& sys, std::span<const double> y0);

/// Backward adjoint state: p^n = ((1/dt) I + A_h^T)^{-1} (p^{n+1} / dt + z^n),
/// n = M..1, p^{M+1} = 0. Not restricted to the control region.
TimeGridFunction solve_backward(const DiscreteSystem& sys, const TimeGridFunction& z);

struct XiResult {
  std::vector<double> xi1;  // xi at the first time level
  TimeGridFunction xi;
};

/// Backward system driven by a state trajectory; same recursion as
/// solve_backward.
XiResult solve_xi(const DiscreteSystem& sys, const TimeGridFunction& y);

TimeGridFunction apply_S(const DiscreteSystem& sys, const TimeGridFunction& v);
TimeGridFunction apply_S_star(const DiscreteSystem& sys, const TimeGridFunction& z);

/// An element of X = R^N x L^2_dt(0,T; R^N).
struct XElement {
  std::vector<double> first;
  TimeGridFunction second;
};

/// <a, b>_X = h (a1, b1) + (a2, b2)_{L^2_dt}
double x_inner(const XElement& a, const XElement& b);

/// Returns (sqrt(beta/gamma) xi^1, y). Throws InvalidArgument unless
/// beta > 0 and gamma > 0.
XElement apply_R(const DiscreteSystem& sys, const TimeGridFunction& v, double beta,
                 double gamma);

/// `scaled_sigma0` is the first X slot, sqrt(beta/gamma) sigma_0; the sigma
/// recursion starts from -(beta/gamma) sigma_0.
TimeGridFunction apply_R_star(const DiscreteSystem& sys,
                              std::span<const double> scaled_sigma0,
                              const TimeGridFunction& f, double beta, double gamma);

}  // namespace nlheat
