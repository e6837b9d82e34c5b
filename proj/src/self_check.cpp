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

#include <algorithm>
#include <cmath>
#include <random>

#include "nlheat/experiment.hpp"
#include "nlheat/simd.hpp"

namespace nlheat {
namespace {

constexpr int kProbes = 20;

TimeGridFunction random_tgf(const Grid& g, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  TimeGridFunction f(g);
  for (double& x : f.values()) x = d(rng);
  return f;
}

std::vector<double> random_vec(std::size_t n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  std::vector<double> v(n);
  for (double& x : v) x = d(rng);
  return v;
}

CheckResult check(std::string name, double value, double threshold) {
  return {std::move(name), value, threshold, value <= threshold};
}

}  // namespace

std::vector<CheckResult> run_self_checks(const ExperimentConfig& cfg) {
  validate(cfg);
  const DiscreteSystem sys = build_system(cfg);
  const Grid& g = sys.grid;
  std::mt19937_64 rng(20210607);
  std::vector<CheckResult> out;

  // Step solver residual, both orientations.
  double worst = 0.0;
  for (int k = 0; k < kProbes; ++k) {
    auto r = random_vec(g.size(), rng);
    for (Transpose tr : {Transpose::kNo, Transpose::kYes}) {
      auto x = sys.stepper.solve(r, tr);
      auto ax = tr == Transpose::kYes ? sys.op.apply_transpose(x) : sys.op.apply(x);
      double err = 0.0, ref = 0.0;
      for (std::size_t i = 0; i < g.size(); ++i) {
        err += std::pow(x[i] / g.dt + ax[i] - r[i], 2);
        ref += r[i] * r[i];
      }
      worst = std::max(worst, std::sqrt(err / ref));
    }
  }
  out.push_back(check("step solver residual", worst, 1e-12));

  // Structured vs dense step solve.
  StepSolver dense(sys.op, g.dt, LinearSolverKind::kDense);
  worst = 0.0;
  for (int k = 0; k < kProbes; ++k) {
    auto r = random_vec(g.size(), rng);
    for (Transpose tr : {Transpose::kNo, Transpose::kYes}) {
      auto a = sys.stepper.solve(r, tr);
      auto b = dense.solve(r, tr);
      double err = 0.0, ref = 0.0;
      for (std::size_t i = 0; i < g.size(); ++i) {
        err += (a[i] - b[i]) * (a[i] - b[i]);
        ref += b[i] * b[i];
      }
      worst = std::max(worst, std::sqrt(err / ref));
    }
  }
  out.push_back(check("structured vs dense step solve", worst, 1e-12));

  // (S v, z) = (v, S* z)
  worst = 0.0;
  for (int k = 0; k < kProbes; ++k) {
    auto v = random_tgf(g, rng);
    auto z = random_tgf(g, rng);
    const double lhs = inner(apply_S(sys, v), z);
    const double rhs = inner(v, apply_S_star(sys, z));
    worst = std::max(worst, std::abs(lhs - rhs) / (norm(v) * norm(z)));
  }
  out.push_back(check("adjoint identity (S, S*)", worst, 1e-10));

  // <R v, (s, f)>_X = (v, R*(s, f))
  const double beta = cfg.beta.front();
  const double gamma = cfg.gamma.front();
  worst = 0.0;
  for (int k = 0; k < kProbes; ++k) {
    auto v = random_tgf(g, rng);
    XElement sf{random_vec(g.size(), rng), random_tgf(g, rng)};
    XElement rv = apply_R(sys, v, beta, gamma);
    const double lhs = x_inner(rv, sf);
    const double rhs = inner(v, apply_R_star(sys, sf.first, sf.second, beta, gamma));
    const double scale = norm(v) * std::sqrt(x_inner(sf, sf));
    worst = std::max(worst, std::abs(lhs - rhs) / scale);
  }
  out.push_back(check("adjoint identity (R, R*)", worst, 1e-10));

  // Central differences against both gradients.
  const auto target = TimeGridFunction::constant_in_time(
      g, resolve_profile(cfg.target, g, "target"));
  ControlSetup setup;
  setup.beta = beta;
  setup.mu = cfg.mu;
  setup.target = target;
  setup.y0 = resolve_profile(cfg.initial_datum, g, "initial_datum");
  LowRegretSetup lr = make_low_regret_setup(g, beta, gamma, target, cfg.mu);
  constexpr double eps = 1e-5;
  double worst_j = 0.0, worst_jg = 0.0;
  for (int k = 0; k < 10; ++k) {
    auto v = random_tgf(g, rng);
    auto w = random_tgf(g, rng);
    auto vp = v, vm = v;
    vp.add_scaled(eps, w);
    vm.add_scaled(-eps, w);
    const double fd = (cost_J(sys, setup, vp).total - cost_J(sys, setup, vm).total) / (2 * eps);
    const double an = inner(grad_J(sys, setup, v), w);
    worst_j = std::max(worst_j, std::abs(fd - an) / std::max(std::abs(an), 1e-300));
    const double fdg =
        (cost_J_gamma(sys, lr, vp).total - cost_J_gamma(sys, lr, vm).total) / (2 * eps);
    const double ang = inner(grad_J_gamma(sys, lr, v), w);
    worst_jg = std::max(worst_jg, std::abs(fdg - ang) / std::max(std::abs(ang), 1e-300));
  }
  out.push_back(check("finite-difference gradient of J", worst_j, 1e-5));
  out.push_back(check("finite-difference gradient of J_gamma", worst_jg, 1e-5));

  // Active vector kernels vs scalar reference.
  const auto& ref = simd::scalar_kernels();
  const auto& act = simd::active();
  worst = 0.0;
  for (std::size_t n : {1u, 3u, 4u, 7u, 61u, 6000u}) {
    auto x = random_vec(n, rng);
    auto y = random_vec(n, rng);
    const double a = ref.dot(x.data(), y.data(), n);
    const double b = act.dot(x.data(), y.data(), n);
    double mag = 0.0;
    for (std::size_t i = 0; i < n; ++i) mag += std::abs(x[i] * y[i]);
    worst = std::max(worst, std::abs(a - b) / mag);
  }
  out.push_back(check("simd dot vs scalar (" + std::string(simd::isa_name(act.isa)) + ")",
                      worst, 1e-14));
  return out;
}

}  // namespace nlheat
