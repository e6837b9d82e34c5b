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

// Low-regret control for an unknown initial datum. The regret sup over
// initial data penalized by gamma reduces to
//
//   J^g(v) = beta ||y(v,0) - z||^2 + mu ||B v||^2 - beta ||z||^2
//            + (beta^2 / gamma) h |xi^1|^2,
//
// where xi solves the backward system driven by y(v,0). Its minimizer solves
// (beta R*R + mu B*B) v = beta S* z.

#pragma once

#include <span>

#include "nlheat/optimal_control.hpp"

namespace nlheat {

struct LowRegretSetup {
  ControlSetup base;  // base.y0 must be zero
  double gamma = 1.0;
};

/// base.y0 is set to zero.
LowRegretSetup make_low_regret_setup(const Grid& grid, double beta, double gamma,
                                     TimeGridFunction target, double mu = 1.0);

void validate(const DiscreteSystem& sys, const LowRegretSetup& setup);

CostReport cost_J_gamma(const DiscreteSystem& sys, const LowRegretSetup& setup,
                        const TimeGridFunction& v);

/// 2 beta R*R v + 2 mu B*B v - 2 beta S* z
TimeGridFunction grad_J_gamma(const DiscreteSystem& sys, const LowRegretSetup& setup,
                              const TimeGridFunction& v);

/// beta R*R v + mu B*B v
TimeGridFunction apply_low_regret_operator(const DiscreteSystem& sys,
                                           const LowRegretSetup& setup,
                                           const TimeGridFunction& v);
/// beta S* z
TimeGridFunction low_regret_rhs(const DiscreteSystem& sys, const LowRegretSetup& setup);

ControlSolution solve_low_regret(const DiscreteSystem& sys, const LowRegretSetup& setup,
                                 const SolverConfig& cfg);

/// Performance of a fixed control when the system starts from y0.
struct ControlEvaluation {
  double functional = 0.0;    // beta ||y - z||^2 + mu ||B v||^2
  double energy = 0.0;        // functional / 2, the tabulated energy
  double distance = 0.0;      // ||y - z||
  double control_norm = 0.0;  // ||B v||
};

ControlEvaluation evaluate_control(const DiscreteSystem& sys, const TimeGridFunction& v,
                                   std::span<const double> y0, double beta,
                                   const TimeGridFunction& target, double mu = 1.0);

}  // namespace nlheat
