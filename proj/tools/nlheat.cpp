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

// nlheat: optimal and low-regret control experiments for the 1-D nonlocal
// heat equation.
//
// Exit codes: 0 success, 1 self-check failure, 2 configuration error,
// 3 solver non-convergence, 4 I/O or file-format error.

#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "nlheat/error.hpp"
#include "nlheat/experiment.hpp"

namespace {

enum ExitCode { kOk = 0, kCheckFailed = 1, kConfig = 2, kNonConvergence = 3, kIo = 4 };

struct Options {
  std::string config;
  std::string out;
  std::optional<int> workers;
  std::optional<std::string> method;
  std::optional<double> tol;
  std::string control;
};

nlheat::ExperimentConfig resolve_config(const Options& opt) {
  nlheat::ExperimentConfig cfg =
      opt.config.empty() ? nlheat::ExperimentConfig{} : nlheat::load_config(opt.config);
  if (opt.workers) cfg.workers = *opt.workers;
  if (opt.method) {
    try {
      cfg.solver.method = nlheat::solver_method_from_string(*opt.method);
    } catch (const nlheat::InvalidArgument& e) {
      throw nlheat::ConfigError("--method", e.what());
    }
  }
  if (opt.tol) cfg.solver.tol = *opt.tol;
  if (!opt.out.empty()) cfg.output_dir = opt.out;
  nlheat::validate(cfg);
  return cfg;
}

void add_common(CLI::App* sub, Options& opt) {
  sub->add_option("--config", opt.config, "JSON experiment configuration");
  sub->add_option("--out", opt.out, "Output directory (overrides output_dir)");
  sub->add_option("--workers", opt.workers, "Concurrent sweep cells");
  sub->add_option("--method", opt.method, "Iterative method: cg | gd");
  sub->add_option("--tol", opt.tol, "Relative residual tolerance");
}

int report(const nlheat::CommandResult& r) {
  for (const auto& p : r.artifacts) std::cout << p.string() << "\n";
  if (!r.all_converged) {
    std::cerr << "error: at least one solve did not converge\n";
    return kNonConvergence;
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Optimal and low-regret control of a 1-D nonlocal heat equation"};
  app.require_subcommand(1);
  Options opt;

  auto* uncontrolled = app.add_subcommand("uncontrolled", "Free evolution from the initial datum");
  auto* optimal = app.add_subcommand("optimal", "Optimal control for each beta");
  auto* low_regret = app.add_subcommand("low-regret", "Low-regret control over (beta, gamma) cells");
  auto* evaluate = app.add_subcommand("evaluate", "Evaluate a stored control on the initial-data family");
  auto* tables = app.add_subcommand("tables", "Reproduce the low-regret and comparison tables");
  auto* check = app.add_subcommand("check", "Run oracle and adjoint self-tests");
  for (auto* sub : {uncontrolled, optimal, low_regret, evaluate, tables, check}) add_common(sub, opt);
  evaluate->add_option("--control", opt.control, "Control CSV (rows t_1..t_M)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }

  try {
    const nlheat::ExperimentConfig cfg = resolve_config(opt);
    const std::filesystem::path out = cfg.output_dir;
    if (*uncontrolled) return report(nlheat::run_uncontrolled(cfg, out, std::cerr));
    if (*optimal) return report(nlheat::run_optimal(cfg, out, std::cerr));
    if (*low_regret) return report(nlheat::run_low_regret(cfg, out, std::cerr));
    if (*evaluate) return report(nlheat::run_evaluate(cfg, opt.control, out, std::cerr));
    if (*tables) return report(nlheat::run_tables(cfg, out, std::cerr));
    if (*check) {
      bool ok = true;
      for (const auto& c : nlheat::run_self_checks(cfg)) {
        std::cout << (c.passed ? "PASS " : "FAIL ") << c.name << ": " << c.value
                  << " (threshold " << c.threshold << ")\n";
        ok = ok && c.passed;
      }
      return ok ? kOk : kCheckFailed;
    }
  } catch (const nlheat::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfig;
  } catch (const nlheat::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kIo;
  } catch (const nlheat::FormatError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kIo;
  } catch (const nlheat::NonConvergence& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kNonConvergence;
  } catch (const nlheat::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfig;
  }
  return kOk;
}
