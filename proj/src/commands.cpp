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
#include <atomic>
#include <exception>
#include <mutex>
#include <ostream>
#include <optional>
#include <thread>

#include "nlheat/error.hpp"
#include "nlheat/experiment.hpp"

namespace nlheat {

void parallel_for(std::size_t count, int workers, const std::function<void(std::size_t)>& fn) {
  const std::size_t n_threads =
      std::min<std::size_t>(count, static_cast<std::size_t>(std::max(workers, 1)));
  if (n_threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(count);
  {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < n_threads; ++t) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < count; i = next++) {
          try {
            fn(i);
          } catch (...) {
            errors[i] = std::current_exception();
          }
        }
      });
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

namespace {

// Fixed cells of the reference table reproduction.
constexpr double kTableBeta = 100.0;
constexpr double kTable2Gamma = 1.0;
constexpr double kTable3Gamma = 10.0;
const std::vector<std::pair<double, double>> kTable1Cells = {
    {1, 10},  {1, 1},  {1, 0.1},  {1, 0.01},   {10, 10}, {10, 1},
    {10, 0.1}, {10, 0.01}, {100, 10}, {100, 1}, {100, 0.1}};

std::filesystem::path prepare_output(const std::filesystem::path& out) {
  std::error_code ec;
  std::filesystem::create_directories(out, ec);
  if (ec || !std::filesystem::is_directory(out)) {
    throw IoError("cannot create output directory '" + out.string() + "'");
  }
  return out;
}

std::string tag(double x) { return format_number(x); }

// One solve's outcome; on non-convergence the last iterate is kept.
struct SolveOutcome {
  ControlSolution solution;
  bool converged = true;
};

template <class Solve>
SolveOutcome guarded_solve(Solve&& solve) {
  SolveOutcome o;
  try {
    o.solution = solve();
  } catch (const NonConvergence& e) {
    o.converged = false;
    o.solution.control = e.last().solution;
    o.solution.report.iterations = e.last().iterations;
    o.solution.report.residual_history = e.last().residual_history;
    o.solution.report.relative_residual = e.last().relative_residual;
  }
  return o;
}

ControlSetup optimal_setup(const ExperimentConfig& cfg, const Grid& grid, double beta,
                           std::vector<double> y0) {
  ControlSetup s;
  s.beta = beta;
  s.mu = cfg.mu;
  s.target = TimeGridFunction::constant_in_time(grid, resolve_profile(cfg.target, grid, "target"));
  s.y0 = std::move(y0);
  return s;
}

LowRegretSetup regret_setup(const ExperimentConfig& cfg, const Grid& grid, double beta,
                            double gamma) {
  return make_low_regret_setup(
      grid, beta, gamma,
      TimeGridFunction::constant_in_time(grid, resolve_profile(cfg.target, grid, "target")),
      cfg.mu);
}

struct LowRegretCell {
  double beta = 0.0;
  double gamma = 0.0;
  SolveOutcome outcome;
};

std::vector<LowRegretCell> solve_cells(const ExperimentConfig& cfg, const DiscreteSystem& sys,
                                       const std::vector<std::pair<double, double>>& cells,
                                       std::ostream& log) {
  std::vector<LowRegretCell> results(cells.size());
  std::mutex log_mutex;
  parallel_for(cells.size(), cfg.workers, [&](std::size_t i) {
    const auto [beta, gamma] = cells[i];
    LowRegretSetup setup = regret_setup(cfg, sys.grid, beta, gamma);
    SolveOutcome o = guarded_solve([&] { return solve_low_regret(sys, setup, cfg.solver); });
    if (!o.converged) o.solution.report.cost = cost_J_gamma(sys, setup, o.solution.control);
    {
      std::lock_guard lock(log_mutex);
      log << "low-regret beta=" << tag(beta) << " gamma=" << tag(gamma)
          << (o.converged ? "" : " [not converged]") << " iterations "
          << o.solution.report.iterations << "\n";
    }
    results[i] = LowRegretCell{beta, gamma, std::move(o)};
  });
  return results;
}

void write_low_regret_cells(const std::vector<LowRegretCell>& cells,
                            const std::filesystem::path& out, const std::string& table_name,
                            CommandResult& result) {
  CsvTable table{{"beta", "gamma", "J_gamma", "control_norm", "distance", "regret",
                  "iterations", "relative_residual", "status"},
                 {}};
  for (const auto& c : cells) {
    const SolveReport& r = c.outcome.solution.report;
    const std::string stem = "low_regret_beta_" + tag(c.beta) + "_gamma_" + tag(c.gamma);
    auto control_path = out / (stem + "_control.csv");
    auto conv_path = out / (stem + "_convergence.csv");
    write_csv(control_path, time_grid_table(c.outcome.solution.control));
    write_csv(conv_path, convergence_table(r.residual_history));
    result.artifacts.push_back(control_path);
    result.artifacts.push_back(conv_path);
    table.rows.push_back({tag(c.beta), tag(c.gamma), format_number(r.cost.total),
                          format_number(r.cost.control_norm), format_number(r.cost.distance),
                          format_number(r.cost.regret.value_or(0.0)),
                          std::to_string(r.iterations), format_number(r.relative_residual),
                          c.outcome.converged ? "converged" : "not_converged"});
    result.all_converged = result.all_converged && c.outcome.converged;
  }
  auto table_path = out / table_name;
  write_csv(table_path, table);
  result.artifacts.push_back(table_path);
}

struct EvaluationRow {
  std::string label;
  ControlEvaluation uncontrolled;
  std::optional<ControlEvaluation> optimal;
  ControlEvaluation supplied;
  bool optimal_converged = true;
};

std::vector<EvaluationRow> evaluate_initial_data(const ExperimentConfig& cfg,
                                                 const DiscreteSystem& sys,
                                                 const TimeGridFunction& control, double beta,
                                                 bool with_optimal, std::ostream& log) {
  const Grid& grid = sys.grid;
  const TimeGridFunction target =
      TimeGridFunction::constant_in_time(grid, resolve_profile(cfg.target, grid, "target"));
  std::vector<EvaluationRow> rows(cfg.initial_data.size());
  std::mutex log_mutex;
  parallel_for(rows.size(), cfg.workers, [&](std::size_t i) {
    const ProfileSpec& spec = cfg.initial_data[i];
    std::vector<double> y0 =
        resolve_profile(spec, grid, "initial_data[" + std::to_string(i) + "]");
    EvaluationRow row;
    row.label = spec.label();
    row.uncontrolled = evaluate_control(sys, TimeGridFunction(grid), y0, beta, target, cfg.mu);
    row.supplied = evaluate_control(sys, control, y0, beta, target, cfg.mu);
    if (with_optimal) {
      ControlSetup setup = optimal_setup(cfg, grid, beta, y0);
      SolveOutcome o = guarded_solve([&] { return solve_optimal_control(sys, setup, cfg.solver); });
      row.optimal_converged = o.converged;
      row.optimal = evaluate_control(sys, o.solution.control, y0, beta, target, cfg.mu);
    }
    {
      std::lock_guard lock(log_mutex);
      log << "evaluated initial datum '" << row.label << "'\n";
    }
    rows[i] = std::move(row);
  });
  return rows;
}

CsvTable evaluation_table(const std::vector<EvaluationRow>& rows, bool with_reference) {
  CsvTable t;
  t.header = {"initial_datum"};
  if (with_reference) {
    t.header.insert(t.header.end(), {"energy_uncontrolled", "distance_uncontrolled",
                                     "energy_optimal", "distance_optimal"});
  }
  t.header.insert(t.header.end(), {"energy_control", "distance_control"});
  for (const auto& r : rows) {
    std::vector<std::string> line{r.label};
    if (with_reference) {
      line.push_back(format_number(r.uncontrolled.energy));
      line.push_back(format_number(r.uncontrolled.distance));
      line.push_back(r.optimal ? format_number(r.optimal->energy) : "");
      line.push_back(r.optimal ? format_number(r.optimal->distance) : "");
    }
    line.push_back(format_number(r.supplied.energy));
    line.push_back(format_number(r.supplied.distance));
    t.rows.push_back(std::move(line));
  }
  return t;
}

}  // namespace

CommandResult run_uncontrolled(const ExperimentConfig& cfg, const std::filesystem::path& out,
                               std::ostream& log) {
  validate(cfg);
  prepare_output(out);
  const DiscreteSystem sys = build_system(cfg);
  const std::vector<double> y0 = resolve_profile(cfg.initial_datum, sys.grid, "initial_datum");
  Trajectory y = solve_free(sys, y0);
  CommandResult result;
  auto path = out / "uncontrolled_state.csv";
  write_csv(path, trajectory_table(y));
  result.artifacts.push_back(path);
  log << "uncontrolled: wrote " << path.string() << "\n";
  return result;
}

CommandResult run_optimal(const ExperimentConfig& cfg, const std::filesystem::path& out,
                          std::ostream& log) {
  validate(cfg);
  prepare_output(out);
  const DiscreteSystem sys = build_system(cfg);
  const std::vector<double> y0 = resolve_profile(cfg.initial_datum, sys.grid, "initial_datum");

  std::vector<SolveOutcome> outcomes(cfg.beta.size());
  std::mutex log_mutex;
  parallel_for(cfg.beta.size(), cfg.workers, [&](std::size_t i) {
    ControlSetup setup = optimal_setup(cfg, sys.grid, cfg.beta[i], y0);
    SolveOutcome o = guarded_solve([&] { return solve_optimal_control(sys, setup, cfg.solver); });
    if (!o.converged) o.solution.report.cost = cost_J(sys, setup, o.solution.control);
    {
      std::lock_guard lock(log_mutex);
      log << "optimal beta=" << tag(cfg.beta[i]) << (o.converged ? "" : " [not converged]")
          << " iterations " << o.solution.report.iterations << " ||Bv|| "
          << format_number(o.solution.report.cost.control_norm) << "\n";
    }
    outcomes[i] = std::move(o);
  });

  CommandResult result;
  CsvTable summary{{"beta", "control_norm", "distance", "J", "iterations", "relative_residual",
                    "status"},
                   {}};
  for (std::size_t i = 0; i < cfg.beta.size(); ++i) {
    const SolveOutcome& o = outcomes[i];
    const SolveReport& r = o.solution.report;
    const std::string stem = "optimal_beta_" + tag(cfg.beta[i]);
    const std::filesystem::path files[] = {out / (stem + "_state.csv"),
                                           out / (stem + "_control.csv"),
                                           out / (stem + "_convergence.csv")};
    write_csv(files[0], trajectory_table(solve_forward(sys, o.solution.control, y0)));
    write_csv(files[1], time_grid_table(o.solution.control));
    write_csv(files[2], convergence_table(r.residual_history));
    result.artifacts.insert(result.artifacts.end(), std::begin(files), std::end(files));
    summary.rows.push_back({tag(cfg.beta[i]), format_number(r.cost.control_norm),
                            format_number(r.cost.distance), format_number(r.cost.total),
                            std::to_string(r.iterations), format_number(r.relative_residual),
                            o.converged ? "converged" : "not_converged"});
    result.all_converged = result.all_converged && o.converged;
  }
  auto summary_path = out / "optimal_summary.csv";
  write_csv(summary_path, summary);
  result.artifacts.push_back(summary_path);
  return result;
}

CommandResult run_low_regret(const ExperimentConfig& cfg, const std::filesystem::path& out,
                             std::ostream& log) {
  validate(cfg);
  prepare_output(out);
  const DiscreteSystem sys = build_system(cfg);
  CommandResult result;
  write_low_regret_cells(solve_cells(cfg, sys, sweep_cells(cfg), log), out,
                         "low_regret_table.csv", result);
  return result;
}

CommandResult run_evaluate(const ExperimentConfig& cfg, const std::filesystem::path& control,
                           const std::filesystem::path& out, std::ostream& log) {
  validate(cfg);
  const DiscreteSystem sys = build_system(cfg);
  TimeGridFunction v = read_control_csv(control, sys.grid);
  prepare_output(out);
  auto rows = evaluate_initial_data(cfg, sys, v, cfg.beta.front(), true, log);
  CommandResult result;
  for (const auto& r : rows) result.all_converged = result.all_converged && r.optimal_converged;
  auto path = out / "evaluation.csv";
  write_csv(path, evaluation_table(rows, true));
  result.artifacts.push_back(path);
  return result;
}

CommandResult run_tables(const ExperimentConfig& cfg, const std::filesystem::path& out,
                         std::ostream& log) {
  validate(cfg);
  prepare_output(out);
  const DiscreteSystem sys = build_system(cfg);
  CommandResult result;

  const auto& cells = cfg.cells.empty() ? kTable1Cells : cfg.cells;
  write_low_regret_cells(solve_cells(cfg, sys, cells, log), out, "table1.csv", result);

  auto controls = solve_cells(cfg, sys, {{kTableBeta, kTable2Gamma}, {kTableBeta, kTable3Gamma}},
                              log);
  for (const auto& c : controls) result.all_converged = result.all_converged && c.outcome.converged;

  auto rows2 = evaluate_initial_data(cfg, sys, controls[0].outcome.solution.control, kTableBeta,
                                     true, log);
  for (const auto& r : rows2) result.all_converged = result.all_converged && r.optimal_converged;
  auto rows3 = evaluate_initial_data(cfg, sys, controls[1].outcome.solution.control, kTableBeta,
                                     false, log);
  const std::filesystem::path t2 = out / "table2.csv";
  const std::filesystem::path t3 = out / "table3.csv";
  write_csv(t2, evaluation_table(rows2, true));
  write_csv(t3, evaluation_table(rows3, false));
  result.artifacts.push_back(t2);
  result.artifacts.push_back(t3);
  return result;
}

}  // namespace nlheat
