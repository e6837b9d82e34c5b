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

#include "nlheat/time_grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "nlheat/error.hpp"
#include "nlheat/simd.hpp"

namespace nlheat {

TimeGridFunction::TimeGridFunction(const Grid& grid)
    : grid_(grid), values_(grid.steps() * grid.size(), 0.0) {}

TimeGridFunction::TimeGridFunction(const Grid& grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid.steps() * grid.size()) {
    throw InvalidArgument("time-grid function: expected " +
                          std::to_string(grid.steps() * grid.size()) + " values, got " +
                          std::to_string(values_.size()));
  }
}

TimeGridFunction TimeGridFunction::constant_in_time(const Grid& grid,
                                                    std::span<const double> profile) {
  if (profile.size() != grid.size()) {
    throw InvalidArgument("time-grid function: profile length " +
                          std::to_string(profile.size()) + " != N = " +
                          std::to_string(grid.size()));
  }
  TimeGridFunction f(grid);
  for (std::size_t k = 0; k < f.steps(); ++k) {
    std::copy(profile.begin(), profile.end(), f.slice(k).begin());
  }
  return f;
}

std::span<double> TimeGridFunction::slice(std::size_t k) {
  return std::span<double>(values_).subspan(k * nodes(), nodes());
}

std::span<const double> TimeGridFunction::slice(std::size_t k) const {
  return std::span<const double>(values_).subspan(k * nodes(), nodes());
}

TimeGridFunction& TimeGridFunction::operator+=(const TimeGridFunction& other) {
  return add_scaled(1.0, other);
}

TimeGridFunction& TimeGridFunction::operator-=(const TimeGridFunction& other) {
  return add_scaled(-1.0, other);
}

TimeGridFunction& TimeGridFunction::operator*=(double a) {
  simd::scale(a, values_);
  return *this;
}

TimeGridFunction& TimeGridFunction::add_scaled(double a, const TimeGridFunction& other) {
  require_same_shape(*this, other, "add_scaled");
  simd::axpy(a, other.values_, values_);
  return *this;
}

void require_same_shape(const TimeGridFunction& a, const TimeGridFunction& b,
                        const char* context) {
  if (a.steps() != b.steps() || a.nodes() != b.nodes()) {
    throw InvalidArgument(std::string(context) + ": shape mismatch (" +
                          std::to_string(a.steps()) + "x" + std::to_string(a.nodes()) +
                          " vs " + std::to_string(b.steps()) + "x" +
                          std::to_string(b.nodes()) + ")");
  }
}

double inner(const TimeGridFunction& f, const TimeGridFunction& g) {
  require_same_shape(f, g, "inner");
  return f.grid().dt * f.grid().h * simd::dot(f.values(), g.values());
}

double norm(const TimeGridFunction& f) { return std::sqrt(inner(f, f)); }

double spatial_inner(const Grid& grid, std::span<const double> a,
                     std::span<const double> b) {
  return grid.h * simd::dot(a, b);
}

Trajectory::Trajectory(const Grid& grid, std::vector<double> states)
    : grid_(grid), states_(std::move(states)) {
  if (states_.size() != (grid.steps() + 1) * grid.size()) {
    throw InvalidArgument("trajectory: expected (M+1)*N states");
  }
}

std::span<const double> Trajectory::state(std::size_t n) const {
  if (n > grid_.steps()) throw InvalidArgument("trajectory: time level out of range");
  return std::span<const double>(states_).subspan(n * grid_.size(), grid_.size());
}

TimeGridFunction Trajectory::tail() const {
  return TimeGridFunction(grid_, std::vector<double>(states_.begin() + grid_.size(),
                                                     states_.end()));
}

}  // namespace nlheat
