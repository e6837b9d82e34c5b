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

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "nlheat/grid.hpp"

namespace nlheat {

/// A function of the time levels t_1..t_M with values in R^N, i.e. an element
/// of the discrete space L^2_dt(0,T; R^N).
///
/// Storage is one contiguous block; slice(k) holds the values at time level
/// t_{k+1}. The inner product is the discrete space-time L^2 product
///
///   (f, g) = sum_n dt * h * (f^n, g^n),
///
/// which approximates the continuous L^2(Q) product.
class TimeGridFunction {
 public:
  TimeGridFunction() = default;
  /// All zeros.
  explicit TimeGridFunction(const Grid& grid);
  /// `values` holds M * N entries, time-major.
  TimeGridFunction(const Grid& grid, std::vector<double> values);

  /// The same spatial profile at every time level.
  static TimeGridFunction constant_in_time(const Grid& grid,
                                           std::span<const double> profile);

  const Grid& grid() const noexcept { return grid_; }
  std::size_t steps() const noexcept { return grid_.steps(); }
  std::size_t nodes() const noexcept { return grid_.size(); }

  std::span<double> slice(std::size_t k);
  std::span<const double> slice(std::size_t k) const;

  std::span<double> values() noexcept { return values_; }
  std::span<const double> values() const noexcept { return values_; }

  TimeGridFunction& operator+=(const TimeGridFunction& other);
  TimeGridFunction& operator-=(const TimeGridFunction& other);
  TimeGridFunction& operator*=(double a);
  /// this += a * other
  TimeGridFunction& add_scaled(double a, const TimeGridFunction& other);

  friend TimeGridFunction operator+(TimeGridFunction a, const TimeGridFunction& b) {
    return a += b;
  }
  friend TimeGridFunction operator-(TimeGridFunction a, const TimeGridFunction& b) {
    return a -= b;
  }
  friend TimeGridFunction operator*(double s, TimeGridFunction a) { return a *= s; }

 private:
  Grid grid_{};
  std::vector<double> values_;
};

/// Throws InvalidArgument unless both functions live on the same mesh.
void require_same_shape(const TimeGridFunction& a, const TimeGridFunction& b,
                        const char* context);

double inner(const TimeGridFunction& f, const TimeGridFunction& g);
double norm(const TimeGridFunction& f);

/// Discrete L^2(0,1) product of two nodal vectors: h * (a, b).
double spatial_inner(const Grid& grid, std::span<const double> a,
                     std::span<const double> b);

/// States y^0..y^M of a forward solve.
class Trajectory {
 public:
  Trajectory(const Grid& grid, std::vector<double> states);

  const Grid& grid() const noexcept { return grid_; }
  /// 0 <= n <= M
  std::span<const double> state(std::size_t n) const;
  std::span<const double> initial() const { return state(0); }
  std::span<const double> terminal() const { return state(grid_.steps()); }

  /// (y^1, ..., y^M) as an element of L^2_dt.
  TimeGridFunction tail() const;

 private:
  Grid grid_;
  std::vector<double> states_;
};

}  // namespace nlheat
