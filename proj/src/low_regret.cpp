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

#include "nlheat/low_regret.hpp"

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include "nlheat/error.hpp"
#include "nlheat/simd.hpp"

namespace nlheat {

LowRegretSetup make_low_regret_setup(const Grid& grid, double beta, double gamma,
                                     TimeGridFunction target, double mu) {
  LowRegretSetup s;
  s.base.beta = beta;
  s.base.mu = mu;
  s.base.target = std::move(target);
  s.base.y0.assign(grid.size(), 0.0);
  s.gamma = gamma;
  return s;
}

void validate(const DiscreteSystem& sys, const LowRegretSetup& setup) {
  validate(sys, setup.base);
  if (!(setup.gamma > 0.0) || !std::isfinite(setup.gamma)) {
    throw InvalidArgument("gamma must be positive");
  }
  if (std::any_of(setup.base.y0.begin(), setup.base.y0.end(),
                  [](double x) { return x != 0.0; })) {
    throw InvalidArgument("low-regret state starts from zero; base.y0 must vanish");
  }
}

CostReport cost_J_gamma(const DiscreteSystem& sys, const LowRegretSetup& setup,
                        const TimeGridFunction& v) {
  validate(sys, setup);
  const ControlSetup& b = setup.base;
  TimeGridFunction y = apply_S(sys, v);
  XiResult xi = solve_xi(sys, y);
  CostReport c;
  c.distance = norm(y - b.target);
  c.control_norm = norm(restrict_to_control(sys, v));
  c.tracking = b.beta * c.distance * c.distance;
  c.control = b.mu * c.control_norm * c.control_norm;
  const double z_norm = norm(b.target);
  c.offset = -b.beta * z_norm * z_norm;
  c.regret = b.beta * b.beta / setup.gamma * spatial_inner(sys.grid, xi.xi1, xi.xi1);
  // tracking + offset = beta ((y, y) - 2 (y, z)), formed without the large
  // cancelling constant so that nearby controls compare accurately.
  const double shifted = b.beta * (inner(y, y) - 2.0 * inner(y, b.target));
  c.total = shifted + c.control + *c.regret;
  return c;
}

TimeGridFunction apply_low_regret_operator(const DiscreteSystem& sys,
                                           const LowRegretSetup& setup,
                                           const TimeGridFunction& v) {
  const double beta = setup.base.beta;
  XElement rv = apply_R(sys, v, beta, setup.gamma);
  TimeGridFunction out = apply_R_star(sys, rv.first, rv.second, beta, setup.gamma);
  out *= beta;
  out.add_scaled(setup.base.mu, restrict_to_control(sys, v));
  return out;
}

TimeGridFunction low_regret_rhs(const DiscreteSystem& sys, const LowRegretSetup& setup) {
  validate(sys, setup);
  TimeGridFunction rhs = apply_S_star(sys, setup.base.target);
  rhs *= setup.base.beta;
  return rhs;
}

TimeGridFunction grad_J_gamma(const DiscreteSystem& sys, const LowRegretSetup& setup,
                              const TimeGridFunction& v) {
  validate(sys, setup);
  TimeGridFunction g = apply_low_regret_operator(sys, setup, v);
  g -= low_regret_rhs(sys, setup);
  g *= 2.0;
  return g;
}

ControlSolution solve_low_regret(const DiscreteSystem& sys, const LowRegretSetup& setup,
                                 const SolverConfig& cfg) {
  TimeGridFunction rhs = low_regret_rhs(sys, setup);
  IterativeResult it = solve_spd(
      [&](const TimeGridFunction& v) { return apply_low_regret_operator(sys, setup, v); },
      rhs, cfg);
  ControlSolution sol;
  sol.control = std::move(it.solution);
  if (cfg.post_mask) sol.control = restrict_to_control(sys, sol.control);
  sol.report.iterations = it.iterations;
  sol.report.residual_history = std::move(it.residual_history);
  sol.report.relative_residual = it.relative_residual;
  sol.report.cost = cost_J_gamma(sys, setup, sol.control);
  return sol;
}

ControlEvaluation evaluate_control(const DiscreteSystem& sys, const TimeGridFunction& v,
                                   std::span<const double> y0, double beta,
                                   const TimeGridFunction& target, double mu) {
  ControlSetup setup;
  setup.beta = beta;
  setup.mu = mu;
  setup.target = target;
  setup.y0.assign(y0.begin(), y0.end());
  CostReport c = cost_J(sys, setup, v);
  ControlEvaluation e;
  e.functional = c.total;
  e.energy = 0.5 * c.total;
  e.distance = c.distance;
  e.control_norm = c.control_norm;
  return e;
}

}  // namespace nlheat
