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

// Experiment configuration, CSV artifacts and the commands behind the CLI.

#pragma once

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "nlheat/evolution.hpp"
#include "nlheat/iterative.hpp"
#include "nlheat/low_regret.hpp"
#include "nlheat/step_solver.hpp"

namespace nlheat {

/// A spatial profile: a named function or inline nodal samples.
///
/// Names: "paper" (2 sin(pi x)), "sin2pi" (sin(2 pi x)), "sin10"
/// (sin(pi x)^10), "step" (1_(0.5,0.8) - 1_(0.2,0.5)), "mixed"
/// (sin(pi x / 3) + 0.3 cos(15 pi x / 4)), "zero", "const(c)".
struct ProfileSpec {
  std::string name;
  std::vector<double> samples;  // used when name is empty

  static ProfileSpec named(std::string n) { return {std::move(n), {}}; }
  std::string label() const { return name.empty() ? "inline" : name; }
  friend bool operator==(const ProfileSpec&, const ProfileSpec&) = default;
};

/// Throws ConfigError (key = `key`) for unknown names or wrong sample count.
std::vector<double> resolve_profile(const ProfileSpec& spec, const Grid& grid,
                                    const std::string& key);

struct KernelSpec {
  std::string name = "paper";  // "paper" | "zero" | "constant(c)"; empty = inline
  std::vector<double> k1;
  std::vector<double> k2;
  friend bool operator==(const KernelSpec&, const KernelSpec&) = default;
};

struct ExperimentConfig {
  int n_interior = 60;
  int n_steps = 100;
  double horizon = 1.0;
  double nu = 0.1;
  KernelSpec kernel;
  double region_a = 0.2;
  double region_b = 0.8;
  ProfileSpec target = ProfileSpec::named("sin2pi");
  ProfileSpec initial_datum = ProfileSpec::named("paper");
  std::vector<ProfileSpec> initial_data = {
      ProfileSpec::named("sin10"), ProfileSpec::named("const(3)"),
      ProfileSpec::named("step"), ProfileSpec::named("mixed")};
  std::vector<double> beta = {100.0};
  std::vector<double> gamma = {1.0};
  /// Explicit (beta, gamma) cells for low-regret sweeps; empty = cross product.
  std::vector<std::pair<double, double>> cells;
  double mu = 1.0;
  SolverConfig solver;
  LinearSolverKind linear_solver = LinearSolverKind::kStructured;
  std::string output_dir = "out";
  int workers = 1;
};

/// Parses and validates a JSON document. Unknown keys are rejected.
ExperimentConfig parse_config(const std::string& json_text);
/// Throws IoError if the file cannot be read.
ExperimentConfig load_config(const std::filesystem::path& path);
std::string dump_config(const ExperimentConfig& cfg);
void save_config(const std::filesystem::path& path, const ExperimentConfig& cfg);
/// Throws ConfigError naming the offending key.
void validate(const ExperimentConfig& cfg);

Grid config_grid(const ExperimentConfig& cfg);
DiscreteSystem build_system(const ExperimentConfig& cfg);
/// (beta, gamma) cells of a low-regret sweep.
std::vector<std::pair<double, double>> sweep_cells(const ExperimentConfig& cfg);

// ---------------------------------------------------------------------------
// CSV: ',' separator, '.' decimal point, header row, first column is the
// coordinate (t or x) or key.

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

/// Shortest round-trip representation.
std::string format_number(double x);

void write_csv(const std::filesystem::path& path, const CsvTable& table);
CsvTable read_csv(const std::filesystem::path& path);
/// Throws FormatError naming the file, line and column.
double parse_csv_number(const std::string& cell, const std::filesystem::path& path,
                        std::size_t line, std::size_t column);

/// Rows t_0..t_M, columns x_1..x_N.
CsvTable trajectory_table(const Trajectory& y);
/// Rows t_1..t_M, columns x_1..x_N.
CsvTable time_grid_table(const TimeGridFunction& f);
CsvTable convergence_table(const std::vector<double>& residual_history);

/// Reads a control written by time_grid_table. Throws FormatError when the
/// shape differs from M rows x (N + 1) columns.
TimeGridFunction read_control_csv(const std::filesystem::path& path, const Grid& grid);

// ---------------------------------------------------------------------------
// Commands. Each writes its artifacts under `out` and returns whether every
// solve converged. Config and I/O problems are thrown.

struct CommandResult {
  bool all_converged = true;
  std::vector<std::filesystem::path> artifacts;
};

CommandResult run_uncontrolled(const ExperimentConfig& cfg, const std::filesystem::path& out,
                               std::ostream& log);
CommandResult run_optimal(const ExperimentConfig& cfg, const std::filesystem::path& out,
                          std::ostream& log);
CommandResult run_low_regret(const ExperimentConfig& cfg, const std::filesystem::path& out,
                             std::ostream& log);
CommandResult run_evaluate(const ExperimentConfig& cfg, const std::filesystem::path& control,
                           const std::filesystem::path& out, std::ostream& log);
CommandResult run_tables(const ExperimentConfig& cfg, const std::filesystem::path& out,
                         std::ostream& log);

struct CheckResult {
  std::string name;
  double value = 0.0;
  double threshold = 0.0;
  bool passed = false;
};

/// Oracle and adjoint self-tests on the configured grid.
std::vector<CheckResult> run_self_checks(const ExperimentConfig& cfg);

/// Runs fn(0..count-1) on up to `workers` threads. The first exception thrown
/// by any task is rethrown after all tasks finished.
void parallel_for(std::size_t count, int workers, const std::function<void(std::size_t)>& fn);

}  // namespace nlheat
