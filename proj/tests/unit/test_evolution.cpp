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
#include "nlheat/evolution.hpp"
#include "support/dense_oracle.hpp"

using namespace nlheat;
namespace nt = nlheat::testing;
using nt::Vec;

namespace {

DiscreteSystem system_for(int n, int m, const KernelFunctions& k = paper_kernel(),
                          LinearSolverKind kind = LinearSolverKind::kStructured) {
  Grid g = build_grid(n, m, 1.0, 0.1);
  return make_system(g, sample_kernel(k, g), assemble_control(g, 0.2, 0.8), kind);
}

nt::DenseProblem dense_for(int n, int m, const KernelFunctions& k = paper_kernel()) {
  return nt::dense_problem(n, m, 1.0, 0.1, k, 0.2, 0.8);
}

std::vector<double> paper_datum(const Grid& g) {
  std::vector<double> y0(g.size());
  for (int i = 1; i <= g.n_interior; ++i) y0[i - 1] = 2.0 * std::sin(std::numbers::pi * g.x(i));
  return y0;
}

}  // namespace

TEST_CASE("forward: zero in, zero out") {
  DiscreteSystem sys = system_for(60, 100);
  Trajectory y = solve_forward(sys, TimeGridFunction(sys.grid), std::vector<double>(60, 0.0));
  for (std::size_t n = 0; n <= 100; ++n)
    for (double v : y.state(n)) CHECK(v == 0.0);
}

TEST_CASE("forward: uncontrolled paper run against dense time stepping") {
  DiscreteSystem sys = system_for(60, 100);
  auto y0 = paper_datum(sys.grid);
  Trajectory y = solve_free(sys, y0);
  CHECK(std::equal(y.initial().begin(), y.initial().end(), y0.begin()));

  nt::Mat step = nt::Mat::Identity(60, 60) / sys.grid.dt + nt::dense_operator(60, 0.1, paper_kernel());
  auto lu = step.partialPivLu();
  Vec cur = nt::to_eigen(y0);
  for (std::size_t n = 1; n <= 100; ++n) {
    cur = lu.solve(cur / sys.grid.dt);
    CHECK(nt::rel_diff(nt::to_eigen(y.state(n)), cur) <= 1e-12);
  }
}

TEST_CASE("forward: zero kernel eigenmode decay") {
  DiscreteSystem sys = system_for(60, 100, zero_kernel());
  const Grid& g = sys.grid;
  std::vector<double> y0(60);
  for (int i = 1; i <= 60; ++i) y0[i - 1] = std::sin(std::numbers::pi * g.x(i));
  const double lambda = g.nu * (2.0 / (g.h * g.h)) * (1.0 - std::cos(std::numbers::pi * g.h));
  Trajectory y = solve_free(sys, y0);
  for (int n = 0; n <= 100; n += 7) {
    const double factor = std::pow(1.0 + g.dt * lambda, -n);
    for (int i = 0; i < 60; ++i) CHECK(y.state(n)[i] == doctest::Approx(factor * y0[i]).epsilon(1e-12));
  }
}

TEST_CASE("backward: zero source and single step") {
  DiscreteSystem sys = system_for(60, 100);
  auto p = solve_backward(sys, TimeGridFunction(sys.grid));
  for (double v : p.values()) CHECK(v == 0.0);

  DiscreteSystem one = system_for(8, 1);
  std::mt19937_64 rng(31);
  TimeGridFunction z = nt::random_function(one.grid, rng);
  auto p1 = solve_backward(one, z);
  auto expect = one.stepper.solve(z.slice(0), Transpose::kYes);
  for (int i = 0; i < 8; ++i) CHECK(p1.slice(0)[i] == doctest::Approx(expect[i]).epsilon(1e-15));
}

TEST_CASE("xi is the backward state driven by y") {
  DiscreteSystem sys = system_for(60, 100);
  std::mt19937_64 rng(37);
  TimeGridFunction y = nt::random_function(sys.grid, rng);
  XiResult xi = solve_xi(sys, y);
  auto p = solve_backward(sys, y);
  CHECK(std::equal(xi.xi.values().begin(), xi.xi.values().end(), p.values().begin()));
  CHECK(std::equal(xi.xi1.begin(), xi.xi1.end(), p.slice(0).begin()));

  XiResult zero = solve_xi(sys, TimeGridFunction(sys.grid));
  for (double v : zero.xi1) CHECK(v == 0.0);
}

TEST_CASE("adjoint identities") {
  for (auto [n, m] : {std::pair{60, 100}, std::pair{5, 4}}) {
    DiscreteSystem sys = system_for(n, m);
    std::mt19937_64 rng(41 + n);
    for (int probe = 0; probe < 20; ++probe) {
      TimeGridFunction v = nt::random_function(sys.grid, rng);
      TimeGridFunction z = nt::random_function(sys.grid, rng);
      const double lhs = inner(apply_S(sys, v), z);
      const double rhs = inner(v, apply_S_star(sys, z));
      CHECK(std::abs(lhs - rhs) <= 1e-10 * norm(v) * norm(z));

      XElement sf{nt::random_vector(sys.grid.size(), rng), nt::random_function(sys.grid, rng)};
      for (auto [beta, gamma] : {std::pair{100.0, 1.0}, std::pair{1.0, 0.01}}) {
        const double a = x_inner(apply_R(sys, v, beta, gamma), sf);
        const double b = inner(v, apply_R_star(sys, sf.first, sf.second, beta, gamma));
        CHECK(std::abs(a - b) <= 1e-10 * norm(v) * std::sqrt(x_inner(sf, sf)));
      }
    }
  }
}

TEST_CASE("R and R* special inputs") {
  DiscreteSystem sys = system_for(60, 100);
  XElement r0 = apply_R(sys, TimeGridFunction(sys.grid), 100, 1);
  for (double v : r0.first) CHECK(v == 0.0);
  for (double v : r0.second.values()) CHECK(v == 0.0);

  auto rs0 = apply_R_star(sys, std::vector<double>(60, 0.0), TimeGridFunction(sys.grid), 100, 1);
  for (double v : rs0.values()) CHECK(v == 0.0);

  std::mt19937_64 rng(43);
  TimeGridFunction f = nt::random_function(sys.grid, rng);
  auto a = apply_R_star(sys, std::vector<double>(60, 0.0), f, 10, 0.1);
  auto b = apply_S_star(sys, f);
  CHECK(nt::rel_diff(nt::to_eigen(a), nt::to_eigen(b)) <= 1e-14);
}

TEST_CASE("all maps are linear") {
  DiscreteSystem sys = system_for(60, 100);
  std::mt19937_64 rng(47);
  const double a = 0.7, b = -1.9;
  TimeGridFunction v1 = nt::random_function(sys.grid, rng);
  TimeGridFunction v2 = nt::random_function(sys.grid, rng);
  TimeGridFunction mix = a * v1 + b * v2;
  auto lin = [&](auto map) {
    Vec lhs = nt::to_eigen(map(mix));
    Vec rhs = a * nt::to_eigen(map(v1)) + b * nt::to_eigen(map(v2));
    return nt::rel_diff(lhs, rhs);
  };
  CHECK(lin([&](const TimeGridFunction& v) { return apply_S(sys, v); }) <= 1e-12);
  CHECK(lin([&](const TimeGridFunction& v) { return apply_S_star(sys, v); }) <= 1e-12);
  CHECK(lin([&](const TimeGridFunction& v) { return apply_R(sys, v, 100, 1).second; }) <= 1e-12);
  CHECK(lin([&](const TimeGridFunction& v) {
          auto r = apply_R(sys, v, 100, 1);
          return TimeGridFunction::constant_in_time(sys.grid, r.first);
        }) <= 1e-12);
  auto s0 = nt::random_vector(60, rng);
  CHECK(lin([&](const TimeGridFunction& f) { return apply_R_star(sys, s0, f, 100, 1) - apply_R_star(sys, s0, TimeGridFunction(sys.grid), 100, 1); }) <= 1e-12);
}

TEST_CASE("superposition of datum and control responses") {
  DiscreteSystem sys = system_for(60, 100);
  std::mt19937_64 rng(53);
  TimeGridFunction v = nt::random_function(sys.grid, rng);
  auto y0 = paper_datum(sys.grid);
  auto full = solve_forward(sys, v, y0).tail();
  auto sum = solve_forward(sys, v, std::vector<double>(60, 0.0)).tail() + solve_free(sys, y0).tail();
  CHECK(nt::rel_diff(nt::to_eigen(full), nt::to_eigen(sum)) <= 1e-13);
}

TEST_CASE("every map matches the dense space-time matrices") {
  for (auto kind : {LinearSolverKind::kStructured, LinearSolverKind::kDense}) {
    DiscreteSystem sys = system_for(5, 4, paper_kernel(), kind);
    nt::DenseProblem d = dense_for(5, 4);
    std::mt19937_64 rng(59);
    const double beta = 10.0, gamma = 0.1;
    for (int probe = 0; probe < 10; ++probe) {
      TimeGridFunction v = nt::random_function(sys.grid, rng);
      TimeGridFunction z = nt::random_function(sys.grid, rng);
      auto y0 = nt::random_vector(5, rng);

      Vec y = d.s * nt::to_eigen(v) + nt::dense_free(d, nt::to_eigen(y0));
      CHECK(nt::rel_diff(nt::to_eigen(solve_forward(sys, v, y0).tail()), y) <= 1e-12);
      CHECK(nt::rel_diff(nt::to_eigen(solve_backward(sys, z)), nt::dense_backward(d, nt::to_eigen(z))) <= 1e-12);
      CHECK(nt::rel_diff(nt::to_eigen(apply_S_star(sys, z)), d.s.transpose() * nt::to_eigen(z)) <= 1e-12);

      XElement r = apply_R(sys, v, beta, gamma);
      CHECK(nt::rel_diff(nt::to_eigen(r.first), nt::dense_r_first(d, beta, gamma) * nt::to_eigen(v)) <= 1e-12);
      CHECK(nt::rel_diff(nt::to_eigen(r.second), d.s * nt::to_eigen(v)) <= 1e-12);

      auto s0 = nt::random_vector(5, rng);
      Vec rs = nt::dense_r_first(d, beta, gamma).transpose() * nt::to_eigen(s0) / d.dt +
               d.s.transpose() * nt::to_eigen(z);
      CHECK(nt::rel_diff(nt::to_eigen(apply_R_star(sys, s0, z, beta, gamma)), rs) <= 1e-12);
    }
  }
}

TEST_CASE("dimension and parameter errors") {
  DiscreteSystem sys = system_for(60, 100);
  Grid other = build_grid(60, 50, 1.0, 0.1);
  CHECK_THROWS_AS(solve_forward(sys, TimeGridFunction(other), std::vector<double>(60, 0.0)), InvalidArgument);
  CHECK_THROWS_AS(solve_forward(sys, TimeGridFunction(sys.grid), std::vector<double>(59, 0.0)), InvalidArgument);
  CHECK_THROWS_AS(solve_backward(sys, TimeGridFunction(other)), InvalidArgument);
  CHECK_THROWS_AS(solve_xi(sys, TimeGridFunction(other)), InvalidArgument);
  CHECK_THROWS_AS(apply_R(sys, TimeGridFunction(sys.grid), 0.0, 1.0), InvalidArgument);
  CHECK_THROWS_AS(apply_R(sys, TimeGridFunction(sys.grid), 1.0, -1.0), InvalidArgument);
  CHECK_THROWS_AS(apply_R_star(sys, std::vector<double>(60, 0.0), TimeGridFunction(sys.grid), 1.0, 0.0), InvalidArgument);
  CHECK_THROWS_AS(apply_R_star(sys, std::vector<double>(3, 0.0), TimeGridFunction(sys.grid), 1.0, 1.0), InvalidArgument);
}

TEST_CASE("time grid function algebra") {
  Grid g = build_grid(3, 2, 1.0, 0.1);
  TimeGridFunction f(g, {1, 2, 3, 4, 5, 6});
  CHECK(f.slice(1)[0] == 4);
  CHECK(inner(f, f) == doctest::Approx(g.dt * g.h * 91));
  CHECK(norm(f) == doctest::Approx(std::sqrt(g.dt * g.h * 91)));
  TimeGridFunction c = TimeGridFunction::constant_in_time(g, std::vector<double>{1, 0, -1});
  CHECK(c.slice(1)[2] == -1);
  CHECK(inner(f, c) == doctest::Approx(g.dt * g.h * (1 - 3 + 4 - 6)));
  CHECK_THROWS_AS(TimeGridFunction(g, {1, 2, 3}), InvalidArgument);
  CHECK_THROWS_AS(f += TimeGridFunction(build_grid(3, 3, 1.0, 0.1)), InvalidArgument);
  CHECK(spatial_inner(g, std::vector<double>{1, 1, 1}, std::vector<double>{1, 2, 3}) == doctest::Approx(6 * g.h));
}
