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
#include <limits>
#include <numbers>
#include <random>

#include "doctest.h"
#include "nlheat/error.hpp"
#include "nlheat/grid.hpp"
#include "support/dense_oracle.hpp"

using namespace nlheat;
using nlheat::testing::random_vector;

TEST_CASE("build_grid spacing") {
  Grid g = build_grid(60, 100, 1.0, 0.1);
  CHECK(g.h == doctest::Approx(1.0 / 61).epsilon(1e-15));
  CHECK(g.dt == doctest::Approx(0.01).epsilon(1e-15));
  CHECK(std::abs(g.h * 61 - 1.0) < 1e-15);
  CHECK(std::abs(g.dt * 100 - 1.0) < 1e-15);
  CHECK(g.x(13) == doctest::Approx(13.0 / 61));
  CHECK(g.t(100) == doctest::Approx(1.0));

  Grid one = build_grid(1, 1, 1.0, 0.0);
  CHECK(one.h == 0.5);
  CHECK(one.dt == 1.0);

  Grid small = build_grid(5, 4, 1.0, 0.1);
  CHECK(small.h == doctest::Approx(1.0 / 6));
  CHECK(small.dt == 0.25);
  auto nodes = small.nodes();
  REQUIRE(nodes.size() == 5);
  CHECK(nodes[4] == doctest::Approx(5.0 / 6));
}

TEST_CASE("build_grid rejects bad sizes") {
  CHECK_THROWS_AS(build_grid(0, 10, 1.0, 0.1), InvalidArgument);
  CHECK_THROWS_AS(build_grid(10, 0, 1.0, 0.1), InvalidArgument);
  CHECK_THROWS_AS(build_grid(10, 10, 0.0, 0.1), InvalidArgument);
  CHECK_THROWS_AS(build_grid(10, 10, -1.0, 0.1), InvalidArgument);
  CHECK_THROWS_AS(build_grid(10, 10, 1.0, -0.1), InvalidArgument);
}

TEST_CASE("sample_kernel") {
  Grid g = build_grid(60, 100, 1.0, 0.1);
  SeparatedKernel k = sample_kernel(paper_kernel(), g);
  REQUIRE(k.k2.size() == 60);
  for (int i = 1; i <= 60; ++i) {
    const double x = g.x(i);
    if (x >= 0.5) CHECK(k.k2[i - 1] == 0.0);
    else CHECK(k.k2[i - 1] == doctest::Approx(20.0 * std::sin(std::numbers::pi * x)));
    CHECK(k.k1[i - 1] == doctest::Approx(std::sin(5 * std::numbers::pi * x)));
  }

  SeparatedKernel z = sample_kernel([](double) { return 0.0; }, paper_kernel().k2, g);
  for (double v : z.k1) CHECK(v == 0.0);

  Grid g3 = build_grid(3, 1, 1.0, 0.1);
  SeparatedKernel c = sample_kernel(constant_kernel(1.0), g3);
  CHECK(c.k1 == std::vector<double>{1, 1, 1});
  CHECK(c.k2 == std::vector<double>{1, 1, 1});
}

TEST_CASE("sample_kernel rejects non-finite samples") {
  Grid g = build_grid(4, 1, 1.0, 0.1);
  auto bad = [](double x) { return x > 0.5 ? std::numeric_limits<double>::infinity() : 1.0; };
  CHECK_THROWS_AS(sample_kernel(bad, [](double) { return 1.0; }, g), InvalidKernel);
  CHECK_THROWS_AS(kernel_from_samples({1, 2, 3}, {1, 2, 3, 4}, g), InvalidArgument);
  CHECK_THROWS_AS(kernel_from_samples({1, 2, std::nan(""), 4}, {1, 2, 3, 4}, g), InvalidKernel);
}

TEST_CASE("kernel_by_name") {
  CHECK(kernel_by_name("zero").k1(0.3) == 0.0);
  CHECK(kernel_by_name("constant(2.5)").k1(0.7) * kernel_by_name("constant(2.5)").k2(0.2) == 2.5);
  CHECK(kernel_by_name("paper").k2(0.75) == 0.0);
  CHECK_THROWS_AS(kernel_by_name("gaussian"), InvalidArgument);
}

TEST_CASE("assemble_operator two-node rank-one block") {
  Grid g = build_grid(2, 1, 1.0, 0.0);
  const double a = 1.5, b = -2.0, c = 0.5, d = 3.0;
  NonlocalOperator op = assemble_operator(g, kernel_from_samples({a, b}, {c, d}, g));
  auto m = op.materialize();
  CHECK(m[0] == doctest::Approx(a * c / 3));
  CHECK(m[1] == doctest::Approx(a * d / 3));
  CHECK(m[2] == doctest::Approx(b * c / 3));
  CHECK(m[3] == doctest::Approx(b * d / 3));
}

TEST_CASE("assemble_operator zero kernel is the Laplacian") {
  Grid g = build_grid(3, 1, 1.0, 0.1);
  NonlocalOperator op = assemble_operator(g, sample_kernel(zero_kernel(), g));
  auto m = op.materialize();
  const double s = 0.1 / (g.h * g.h);
  const double expect[9] = {2 * s, -s, 0, -s, 2 * s, -s, 0, -s, 2 * s};
  for (int k = 0; k < 9; ++k) CHECK(m[k] == doctest::Approx(expect[k]).epsilon(1e-15));
}

TEST_CASE("assemble_operator matches brute-force assembly") {
  Grid g = build_grid(60, 100, 1.0, 0.1);
  NonlocalOperator op = assemble_operator(g, sample_kernel(paper_kernel(), g));
  auto m = op.materialize();
  nlheat::testing::Mat ref = nlheat::testing::dense_operator(60, 0.1, paper_kernel());
  double worst = 0.0;
  for (int i = 0; i < 60; ++i)
    for (int j = 0; j < 60; ++j)
      worst = std::max(worst, std::abs(m[i * 60 + j] - ref(i, j)) / std::max(1.0, std::abs(ref(i, j))));
  CHECK(worst <= 1e-14);
}

TEST_CASE("assemble_operator dimension mismatch") {
  Grid g = build_grid(4, 1, 1.0, 0.1);
  Grid g5 = build_grid(5, 1, 1.0, 0.1);
  CHECK_THROWS_AS(assemble_operator(g, sample_kernel(paper_kernel(), g5)), InvalidArgument);
}

TEST_CASE("structured product agrees with materialization") {
  Grid g = build_grid(60, 100, 1.0, 0.1);
  NonlocalOperator op = assemble_operator(g, sample_kernel(paper_kernel(), g));
  auto m = op.materialize();
  std::mt19937_64 rng(7);
  for (int probe = 0; probe < 100; ++probe) {
    auto y = random_vector(60, rng);
    auto ay = op.apply(y);
    double ynorm = 0.0;
    for (double v : y) ynorm += v * v;
    ynorm = std::sqrt(ynorm);
    for (int i = 0; i < 60; ++i) {
      double ref = 0.0, mag = 0.0;
      for (int j = 0; j < 60; ++j) {
        ref += m[i * 60 + j] * y[j];
        mag += std::abs(m[i * 60 + j]);
      }
      CHECK(std::abs(ay[i] - ref) <= 1e-12 * mag * ynorm);
    }
  }
}

TEST_CASE("transpose is the adjoint") {
  Grid g = build_grid(60, 100, 1.0, 0.1);
  NonlocalOperator op = assemble_operator(g, sample_kernel(paper_kernel(), g));
  NonlocalOperator opt = op.transposed();
  std::mt19937_64 rng(11);
  for (int probe = 0; probe < 20; ++probe) {
    auto y = random_vector(60, rng);
    auto z = random_vector(60, rng);
    auto ay = op.apply(y);
    auto atz = op.apply_transpose(z);
    auto atz2 = opt.apply(z);
    double lhs = 0, rhs = 0, scale = 0;
    for (int i = 0; i < 60; ++i) {
      lhs += ay[i] * z[i];
      rhs += y[i] * atz[i];
      scale += std::abs(ay[i] * z[i]);
      CHECK(atz[i] == doctest::Approx(atz2[i]).epsilon(1e-13));
    }
    CHECK(std::abs(lhs - rhs) <= 1e-12 * scale);
  }
}

TEST_CASE("assemble_control masks") {
  Grid g = build_grid(60, 100, 1.0, 0.1);
  ControlOperator b = assemble_control(g, 0.2, 0.8);
  for (std::size_t i = 0; i < 60; ++i) CHECK(b.contains(i) == (i + 1 >= 13 && i + 1 <= 48));
  CHECK(b.active_count() == 36);

  ControlOperator all = assemble_control(g, 0.0, 1.0);
  CHECK(all.active_count() == 60);

  Grid g4 = build_grid(4, 1, 1.0, 0.1);
  CHECK_THROWS_AS(assemble_control(g4, 0.9, 0.95), EmptyControlRegion);
  // Nodes exactly on the boundary are excluded.
  CHECK_THROWS_AS(assemble_control(g4, 0.2, 0.4), EmptyControlRegion);
  CHECK_THROWS_AS(assemble_control(g4, 0.5, 0.3), InvalidArgument);
  CHECK_THROWS_AS(assemble_control(g4, -0.1, 0.3), InvalidArgument);
}

TEST_CASE("control operator is an idempotent symmetric projection") {
  Grid g = build_grid(60, 100, 1.0, 0.1);
  ControlOperator b = assemble_control(g, 0.2, 0.8);
  std::mt19937_64 rng(3);
  for (int probe = 0; probe < 20; ++probe) {
    auto y = random_vector(60, rng);
    auto z = random_vector(60, rng);
    auto by = b.apply(y);
    auto bby = b.apply(by);
    CHECK(by == bby);
    auto bz = b.apply(z);
    double lhs = 0, rhs = 0;
    for (int i = 0; i < 60; ++i) {
      lhs += by[i] * z[i];
      rhs += y[i] * bz[i];
    }
    CHECK(lhs == rhs);
    for (int i = 0; i < 60; ++i) {
      if (b.contains(i)) CHECK(by[i] == y[i]);
      else CHECK(by[i] == 0.0);
    }
  }
}

TEST_CASE("nonlocal term converges at first order or better") {
  // K1(x) = cos(x), K2(s) = exp(s), y(s) = sin(pi s):
  // int_0^1 e^s sin(pi s) ds = pi (e + 1) / (1 + pi^2).
  const double exact = std::numbers::pi * (std::numbers::e + 1) / (1 + std::numbers::pi * std::numbers::pi);
  KernelFunctions k{[](double x) { return std::cos(x); }, [](double s) { return std::exp(s); }};
  double prev = 0.0;
  for (int n : {16, 32, 64, 128, 256}) {
    Grid g = build_grid(n, 1, 1.0, 0.0);
    NonlocalOperator op = assemble_operator(g, sample_kernel(k, g));
    std::vector<double> y(n);
    for (int i = 1; i <= n; ++i) y[i - 1] = std::sin(std::numbers::pi * g.x(i));
    auto ay = op.apply(y);
    double err = 0.0;
    for (int i = 1; i <= n; ++i) err = std::max(err, std::abs(ay[i - 1] - std::cos(g.x(i)) * exact));
    if (prev > 0.0) CHECK(prev / err > 1.8);
    prev = err;
  }
}
