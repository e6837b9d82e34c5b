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

#include "nlheat/optimal_control.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "nlheat/error.hpp"

namespace nlheat {

void validate(const DiscreteSystem& sys, const ControlSetup& setup) {
  if (!(setup.beta > 0.0) || !std::isfinite(setup.beta)) {
    throw InvalidArgument("beta must be positive");
  }
  if (!(setup.mu > 0.0) || !std::isfinite(setup.mu)) {
    throw InvalidArgument("mu must be positive");
  }
  if (setup.target.steps() != sys.grid.steps() || setup.target.nodes() != sys.grid.size()) {
    throw InvalidArgument("target must have M time levels of length N");
  }
  if (setup.y0.size() != sys.grid.size()) {
    throw InvalidArgument("initial datum must have length N = " +
                          std::to_string(sys.grid.size()));
  }
}

TimeGridFunction restrict_to_control(const DiscreteSystem& sys, const TimeGridFunction& v) {
  TimeGridFunction out = v;
  for (std::size_t k = 0; k < out.steps(); ++k) sys.control.apply_in_place(out.slice(k));
  return out;
}

CostReport cost_J(const DiscreteSystem& sys, const ControlSetup& setup,
                  const TimeGridFunction& v) {
  validate(sys, setup);
  TimeGridFunction y = solve_forward(sys, v, setup.y0).tail();
  CostReport c;
  c.distance = norm(y - setup.target);
  c.control_norm = norm(restrict_to_control(sys, v));
  c.tracking = setup.beta * c.distance * c.distance;
  c.control = setup.mu * c.control_norm * c.control_norm;
  c.total = c.tracking + c.control;
  return c;
}

TimeGridFunction grad_J(const DiscreteSystem& sys, const ControlSetup& setup,
                        const TimeGridFunction& v) {
  validate(sys, setup);
  // S v - w = y(v, y0) - z, since y(v, y0) = S v + y(0, y0).
  TimeGridFunction misfit = solve_forward(sys, v, setup.y0).tail() - setup.target;
  TimeGridFunction g = apply_S_star(sys, misfit);
  g *= 2.0 * setup.beta;
  g.add_scaled(2.0 * setup.mu, restrict_to_control(sys, v));
  return g;
}

TimeGridFunction apply_normal_operator(const DiscreteSystem& sys, const ControlSetup& setup,
                                       const TimeGridFunction& v) {
  TimeGridFunction out = apply_S_star(sys, apply_S(sys, v));
  out *= setup.beta;
  out.add_scaled(setup.mu, restrict_to_control(sys, v));
  return out;
}

TimeGridFunction normal_rhs(const DiscreteSystem& sys, const ControlSetup& setup) {
  validate(sys, setup);
  TimeGridFunction w = setup.target - solve_free(sys, setup.y0).tail();
  TimeGridFunction rhs = apply_S_star(sys, w);
  rhs *= setup.beta;
  return rhs;
}

ControlSolution solve_optimal_control(const DiscreteSystem& sys, const ControlSetup& setup,
                                      const SolverConfig& cfg) {
  TimeGridFunction rhs = normal_rhs(sys, setup);
  IterativeResult it = solve_spd(
      [&](const TimeGridFunction& v) { return apply_normal_operator(sys, setup, v); }, rhs,
      cfg);
  ControlSolution sol;
  sol.control = std::move(it.solution);
  if (cfg.post_mask) sol.control = restrict_to_control(sys, sol.control);
  sol.report.iterations = it.iterations;
  sol.report.residual_history = std::move(it.residual_history);
  sol.report.relative_residual = it.relative_residual;
  sol.report.cost = cost_J(sys, setup, sol.control);
  return sol;
}

}  // namespace nlheat
