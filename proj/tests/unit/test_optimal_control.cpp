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


#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "nlheat/error.hpp"
#include "nlheat/low_regret.hpp"
#include "nlheat/optimal_control.hpp"
#include "support/dense_oracle.hpp"

using namespace nlheat;
namespace nt = nlheat::testing;
using nt::Vec;

namespace {

constexpr double kPaperTol = 0.05;

DiscreteSystem paper_system() {
  Grid g = build_grid(60, 100, 1.0, 0.1);
  return make_system(g, sample_kernel(paper_kernel(), g), assemble_control(g, 0.2, 0.8));
}

std::vector<double> profile(const Grid& g, double (*f)(double)) {
  std::vector<double> y(g.size());
  for (int i = 1; i <= g.n_interior; ++i) y[i - 1] = f(g.x(i));
  return y;
}

double sin2pi(double x) { return std::sin(2 * std::numbers::pi * x); }
double two_sin(double x) { return 2 * std::sin(std::numbers::pi * x); }
double sin10(double x) { return std::pow(std::sin(std::numbers::pi * x), 10); }
double three(double) { return 3.0; }

ControlSetup paper_setup(const DiscreteSystem& sys, double beta) {
  ControlSetup s;
  s.beta = beta;
  s.target = TimeGridFunction::constant_in_time(sys.grid, profile(sys.grid, sin2pi));
  s.y0 = profile(sys.grid, two_sin);
  return s;
}

bool within(double value, double reference, double rel) {
  return std::abs(value - reference) <= rel * std::abs(reference);
}

}  // namespace

TEST_CASE("cost of the zero control") {
  DiscreteSystem sys = paper_system();
  ControlSetup s = paper_setup(sys, 100);
  CostReport c = cost_J(sys, s, TimeGridFunction(sys.grid));
  CHECK(c.control == 0.0);
  CHECK(c.offset == 0.0);
  CHECK_FALSE(c.regret.has_value());
  const double d = norm(solve_free(sys, s.y0).tail() - s.target);
  CHECK(c.total == doctest::Approx(100 * d * d).epsilon(1e-14));
  CHECK(c.total == doctest::Approx(c.tracking + c.control).epsilon(1e-14));

  // Tabulated energies are half the functional.
  s.y0 = profile(sys.grid, three);
  c = cost_J(sys, s, TimeGridFunction(sys.grid));
  CHECK(within(c.total / 2, 191.09119, kPaperTol));
  CHECK(within(c.distance, 1.95495, kPaperTol));
  s.y0 = profile(sys.grid, sin10);
  c = cost_J(sys, s, TimeGridFunction(sys.grid));
  CHECK(within(c.total / 2, 27.62901, kPaperTol));
  CHECK(within(c.distance, 0.74336, kPaperTol));
}

TEST_CASE("gradient: central differences") {
  DiscreteSystem sys = paper_system();
  std::mt19937_64 rng(61);
  for (double beta : {10.0, 100.0, 1000.0}) {
    ControlSetup s = paper_setup(sys, beta);
    for (int probe = 0; probe < 10; ++probe) {
      TimeGridFunction v = nt::random_function(sys.grid, rng);
      TimeGridFunction w = nt::random_function(sys.grid, rng);
      const double eps = 1e-5;
      const double fd = (cost_J(sys, s, v + eps * w).total - cost_J(sys, s, v - eps * w).total) / (2 * eps);
      const double an = inner(grad_J(sys, s, v), w);
      CHECK(std::abs(fd - an) <= 1e-5 * std::abs(an));
    }
  }
}

TEST_CASE("gradient vanishes for trivial data") {
  DiscreteSystem sys = paper_system();
  ControlSetup s;
  s.beta = 100;
  s.target = TimeGridFunction(sys.grid);
  s.y0.assign(60, 0.0);
  TimeGridFunction g0 = grad_J(sys, s, TimeGridFunction(sys.grid));
  for (double g : g0.values()) CHECK(g == 0.0);
}

TEST_CASE("normal operator is symmetric positive definite on the region") {
  DiscreteSystem sys = paper_system();
  ControlSetup s = paper_setup(sys, 100);
  std::mt19937_64 rng(67);
  for (int probe = 0; probe < 20; ++probe) {
    TimeGridFunction v = nt::random_function(sys.grid, rng);
    TimeGridFunction w = nt::random_function(sys.grid, rng);
    const double a = inner(apply_normal_operator(sys, s, v), w);
    const double b = inner(v, apply_normal_operator(sys, s, w));
    CHECK(std::abs(a - b) <= 1e-10 * norm(v) * norm(w));
    TimeGridFunction bv = restrict_to_control(sys, v);
    const double bn = norm(bv);
    CHECK(inner(apply_normal_operator(sys, s, bv), bv) >= bn * bn);
    CHECK(bn > 0.0);
  }
}

TEST_CASE("optimal control reproduces the reference control costs") {
  DiscreteSystem sys = paper_system();
  const double expect[] = {1.57137, 4.19168, 7.41933};
  const double betas[] = {10, 100, 1000};
  double prev_cost = 0.0, prev_dist = 1e300;
  for (int k = 0; k < 3; ++k) {
    ControlSetup s = paper_setup(sys, betas[k]);
    ControlSolution sol = solve_optimal_control(sys, s, SolverConfig{});
    CHECK(within(sol.report.cost.control_norm, expect[k], kPaperTol));
    CHECK(sol.report.relative_residual <= 1e-8);
    CHECK(sol.report.residual_history.front() == 1.0);
    CHECK(sol.report.cost.total ==
          doctest::Approx(sol.report.cost.tracking + sol.report.cost.control).epsilon(1e-10));
    // Stronger tracking weight: better fit, more expensive control.
    CHECK(sol.report.cost.control_norm > prev_cost);
    CHECK(sol.report.cost.distance < prev_dist);
    prev_cost = sol.report.cost.control_norm;
    prev_dist = sol.report.cost.distance;

    // First-order condition and local optimality.
    TimeGridFunction g = grad_J(sys, s, sol.control);
    TimeGridFunction rhs = normal_rhs(sys, s);
    CHECK(norm(g) <= 2 * 1e-8 * norm(rhs) * 1.0001);
    std::mt19937_64 rng(71 + k);
    const double j = sol.report.cost.total;
    for (int probe = 0; probe < 5; ++probe) {
      TimeGridFunction w = nt::random_function(sys.grid, rng);
      CHECK(cost_J(sys, s, sol.control + 1e-3 * w).total >= j);
      CHECK(cost_J(sys, s, sol.control - 1e-3 * w).total >= j);
    }
  }
}

TEST_CASE("target equal to the free solution needs no control") {
  DiscreteSystem sys = paper_system();
  ControlSetup s = paper_setup(sys, 100);
  s.target = solve_free(sys, s.y0).tail();
  ControlSolution sol = solve_optimal_control(sys, s, SolverConfig{});
  for (double v : sol.control.values()) CHECK(v == 0.0);
  CHECK(sol.report.relative_residual == 0.0);
  CHECK(sol.report.iterations == 0);
}

TEST_CASE("small problem matches the dense normal equation") {
  Grid g = build_grid(5, 4, 1.0, 0.1);
  DiscreteSystem sys = make_system(g, sample_kernel(paper_kernel(), g), assemble_control(g, 0.2, 0.8));
  nt::DenseProblem d = nt::dense_problem(5, 4, 1.0, 0.1, paper_kernel(), 0.2, 0.8);
  std::mt19937_64 rng(73);
  for (double beta : {10.0, 100.0}) {
    ControlSetup s;
    s.beta = beta;
    s.mu = 1.0;
    s.target = nt::random_function(g, rng);
    s.y0 = nt::random_vector(5, rng);
    SolverConfig cfg;
    cfg.tol = 1e-12;
    ControlSolution sol = solve_optimal_control(sys, s, cfg);

    Vec w = nt::to_eigen(s.target) - nt::dense_free(d, nt::to_eigen(s.y0));
    Vec expect = nt::solve_on_region(d, nt::dense_optimal_h(d, beta, 1.0), beta * d.s.transpose() * w);
    CHECK(nt::rel_diff(nt::to_eigen(sol.control), expect) <= 1e-8);
  }
}

TEST_CASE("gradient descent reaches the same control") {
  Grid g = build_grid(5, 4, 1.0, 0.1);
  DiscreteSystem sys = make_system(g, sample_kernel(paper_kernel(), g), assemble_control(g, 0.2, 0.8));
  std::mt19937_64 rng(79);
  ControlSetup s;
  s.beta = 10;
  s.target = nt::random_function(g, rng);
  s.y0 = nt::random_vector(5, rng);
  SolverConfig cg;
  cg.tol = 1e-12;
  SolverConfig gd;
  gd.method = SolverMethod::kGradientDescent;
  gd.tol = 1e-10;
  gd.max_iter = 200000;
  auto a = solve_optimal_control(sys, s, cg);
  auto b = solve_optimal_control(sys, s, gd);
  CHECK(nt::rel_diff(nt::to_eigen(b.control), nt::to_eigen(a.control)) <= 1e-8);
  CHECK(b.report.iterations > a.report.iterations);
}

TEST_CASE("iteration budget exhaustion carries the last iterate") {
  DiscreteSystem sys = paper_system();
  ControlSetup s = paper_setup(sys, 100);
  SolverConfig cfg;
  cfg.max_iter = 2;
  try {
    solve_optimal_control(sys, s, cfg);
    FAIL("expected NonConvergence");
  } catch (const NonConvergence& e) {
    CHECK(e.last().iterations == 2);
    CHECK(e.last().relative_residual > cfg.tol);
    CHECK(norm(e.last().solution) > 0.0);
  }
}

TEST_CASE("post-masking zeroes the control outside the region") {
  DiscreteSystem sys = paper_system();
  ControlSetup s = paper_setup(sys, 100);
  SolverConfig cfg;
  cfg.post_mask = true;
  auto sol = solve_optimal_control(sys, s, cfg);
  for (std::size_t n = 0; n < 100; ++n)
    for (std::size_t i = 0; i < 60; ++i)
      if (!sys.control.contains(i)) CHECK(sol.control.slice(n)[i] == 0.0);
}

TEST_CASE("setup and solver validation") {
  DiscreteSystem sys = paper_system();
  ControlSetup s = paper_setup(sys, 0.0);
  CHECK_THROWS_AS(cost_J(sys, s, TimeGridFunction(sys.grid)), InvalidArgument);
  s = paper_setup(sys, 100);
  s.mu = -1;
  CHECK_THROWS_AS(cost_J(sys, s, TimeGridFunction(sys.grid)), InvalidArgument);
  s = paper_setup(sys, 100);
  s.y0.resize(10);
  CHECK_THROWS_AS(cost_J(sys, s, TimeGridFunction(sys.grid)), InvalidArgument);
  s = paper_setup(sys, 100);
  CHECK_THROWS_AS(cost_J(sys, s, TimeGridFunction(build_grid(60, 10, 1.0, 0.1))), InvalidArgument);

  SolverConfig cfg;
  cfg.tol = 0.0;
  CHECK_THROWS_AS(validate(cfg), InvalidArgument);
  cfg = SolverConfig{};
  cfg.max_iter = 0;
  CHECK_THROWS_AS(validate(cfg), InvalidArgument);
  CHECK(solver_method_from_string("gd") == SolverMethod::kGradientDescent);
  CHECK(solver_method_from_string("cg") == SolverMethod::kConjugateGradient);
  CHECK_THROWS_AS(solver_method_from_string("bfgs"), InvalidArgument);
}
