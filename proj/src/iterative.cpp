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

#include "nlheat/iterative.hpp"

#include <cmath>
#include <sstream>
#include <utility>

#include "nlheat/simd.hpp"

namespace nlheat {
namespace {

std::string non_convergence_message(const IterativeResult& r, double tol) {
  std::ostringstream os;
  os << "no convergence after " << r.iterations << " iterations (relative residual "
     << r.relative_residual << ", tolerance " << tol << ")";
  return os.str();
}

double true_residual(const LinearMap& apply_h, const TimeGridFunction& x,
                     const TimeGridFunction& b, double b_norm) {
  return norm(b - apply_h(x)) / b_norm;
}

IterativeResult conjugate_gradient(const LinearMap& apply_h, const TimeGridFunction& b,
                                   double b_norm, const SolverConfig& cfg) {
  IterativeResult out;
  out.solution = TimeGridFunction(b.grid());
  out.residual_history.push_back(1.0);
  TimeGridFunction r = b;
  TimeGridFunction d = b;
  double rr = inner(r, r);
  while (out.iterations < cfg.max_iter) {
    TimeGridFunction hd = apply_h(d);
    const double curvature = inner(d, hd);
    if (!(curvature > 0.0)) break;  // H not positive on d: cannot continue
    const double alpha = rr / curvature;
    out.solution.add_scaled(alpha, d);
    r.add_scaled(-alpha, hd);
    const double rr_next = inner(r, r);
    ++out.iterations;
    double rel = std::sqrt(rr_next) / b_norm;
    if (rel <= cfg.tol) {
      // Confirm against the true residual; restart from it if the recursion
      // drifted.
      r = b - apply_h(out.solution);
      rel = norm(r) / b_norm;
      out.residual_history.push_back(rel);
      if (rel <= cfg.tol) break;
      d = r;
      rr = inner(r, r);
      continue;
    }
    out.residual_history.push_back(rel);
    // d = r + (rr_next / rr) d
    simd::xpby(r.values(), rr_next / rr, d.values());
    rr = rr_next;
  }
  return out;
}

IterativeResult gradient_descent(const LinearMap& apply_h, const TimeGridFunction& b,
                                 double b_norm, const SolverConfig& cfg) {
  IterativeResult out;
  out.solution = TimeGridFunction(b.grid());
  out.residual_history.push_back(1.0);
  double step = cfg.step;
  if (!(step > 0.0)) step = 1.0 / estimate_largest_eigenvalue(apply_h, b);
  TimeGridFunction r = b;
  while (out.iterations < cfg.max_iter) {
    TimeGridFunction hr = apply_h(r);
    out.solution.add_scaled(step, r);
    r.add_scaled(-step, hr);
    ++out.iterations;
    const double rel = norm(r) / b_norm;
    out.residual_history.push_back(rel);
    if (!std::isfinite(rel)) break;
    if (rel <= cfg.tol) break;
  }
  return out;
}

}  // namespace

SolverMethod solver_method_from_string(std::string_view name) {
  if (name == "cg") return SolverMethod::kConjugateGradient;
  if (name == "gd" || name == "gradient_descent") return SolverMethod::kGradientDescent;
  throw InvalidArgument("unknown solver method '" + std::string(name) +
                        "' (expected cg|gd)");
}

std::string_view to_string(SolverMethod method) noexcept {
  return method == SolverMethod::kGradientDescent ? "gd" : "cg";
}

void validate(const SolverConfig& cfg) {
  if (!(cfg.tol > 0.0) || !std::isfinite(cfg.tol)) {
    throw InvalidArgument("solver tolerance must be positive");
  }
  if (cfg.max_iter < 1) throw InvalidArgument("solver max_iter must be >= 1");
  if (!std::isfinite(cfg.step) || cfg.step < 0.0) {
    throw InvalidArgument("gradient descent step must be >= 0 (0 = automatic)");
  }
}

NonConvergence::NonConvergence(IterativeResult last, double tol)
    : Error(non_convergence_message(last, tol)), last_(std::move(last)) {}

double estimate_largest_eigenvalue(const LinearMap& apply_h, const TimeGridFunction& start,
                                   int iterations) {
  TimeGridFunction x = start;
  double lambda = 0.0;
  double nx = norm(x);
  if (nx == 0.0) return 1.0;
  x *= 1.0 / nx;
  for (int i = 0; i < iterations; ++i) {
    TimeGridFunction hx = apply_h(x);
    lambda = inner(x, hx);
    const double nh = norm(hx);
    if (nh == 0.0) break;
    x = std::move(hx);
    x *= 1.0 / nh;
  }
  // The Rayleigh quotient approaches lambda_max from below.
  return lambda > 0.0 ? 1.05 * lambda : 1.0;
}

IterativeResult solve_spd(const LinearMap& apply_h, const TimeGridFunction& rhs,
                          const SolverConfig& cfg) {
  validate(cfg);
  const double b_norm = norm(rhs);
  if (b_norm == 0.0) {
    IterativeResult zero;
    zero.solution = TimeGridFunction(rhs.grid());
    zero.residual_history.push_back(0.0);
    return zero;
  }
  IterativeResult out = cfg.method == SolverMethod::kGradientDescent
                            ? gradient_descent(apply_h, rhs, b_norm, cfg)
                            : conjugate_gradient(apply_h, rhs, b_norm, cfg);
  out.relative_residual = true_residual(apply_h, out.solution, rhs, b_norm);
  if (!(out.residual_history.back() <= cfg.tol)) throw NonConvergence(std::move(out), cfg.tol);
  return out;
}

}  // namespace nlheat
