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

// Tracking-type optimal control with full knowledge of the initial datum:
//
//   J(v) = beta ||y(v) - z||^2 + mu ||B v||^2,
//
// minimized through the normal equation (beta S*S + mu B*B) v = beta S* w,
// w = z - y(0, y0).

#pragma once

#include <optional>
#include <vector>

#include "nlheat/evolution.hpp"
#include "nlheat/iterative.hpp"
#include "nlheat/time_grid.hpp"

namespace nlheat {

struct ControlSetup {
  double beta = 100.0;
  double mu = 1.0;
  TimeGridFunction target;
  std::vector<double> y0;
};

/// Throws InvalidArgument for nonpositive weights or mismatched shapes.
void validate(const DiscreteSystem& sys, const ControlSetup& setup);

/// Cost decomposition. total = tracking + control + offset + regret.
struct CostReport {
  double total = 0.0;
  double tracking = 0.0;  // beta ||y - z||^2
  double control = 0.0;   // mu ||B v||^2
  double offset = 0.0;    // -beta ||z||^2 in the low-regret functional, else 0
  std::optional<double> regret;  // (beta^2 / gamma) h |xi^1|^2
  double control_norm = 0.0;     // ||B v||
  double distance = 0.0;         // ||y - z||
};

struct SolveReport {
  int iterations = 0;
  std::vector<double> residual_history;
  double relative_residual = 0.0;
  CostReport cost;
};

struct ControlSolution {
  TimeGridFunction control;
  SolveReport report;
};

/// B v, slice by slice.
TimeGridFunction restrict_to_control(const DiscreteSystem& sys, const TimeGridFunction& v);

CostReport cost_J(const DiscreteSystem& sys, const ControlSetup& setup,
                  const TimeGridFunction& v);

/// 2 beta S*(S v - w) + 2 mu B*B v
TimeGridFunction grad_J(const DiscreteSystem& sys, const ControlSetup& setup,
                        const TimeGridFunction& v);

/// beta S*S v + mu B*B v
TimeGridFunction apply_normal_operator(const DiscreteSystem& sys, const ControlSetup& setup,
                                       const TimeGridFunction& v);
/// beta S* (z - y(0, y0))
TimeGridFunction normal_rhs(const DiscreteSystem& sys, const ControlSetup& setup);

/// Throws NonConvergence (carrying the last iterate) when the iteration budget
/// is exhausted.
ControlSolution solve_optimal_control(const DiscreteSystem& sys, const ControlSetup& setup,
                                      const SolverConfig& cfg);

}  // namespace nlheat
