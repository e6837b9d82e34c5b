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
#include <fstream>
#include <locale>
#include <numbers>
#include <set>
#include <sstream>
#include <string>

#include "json.hpp"
#include "nlheat/error.hpp"
#include "nlheat/experiment.hpp"

namespace nlheat {
namespace {

using Json = nlohmann::ordered_json;

void reject_unknown(const Json& obj, const std::set<std::string>& allowed,
                    const std::string& where) {
  for (const auto& [key, _] : obj.items()) {
    if (!allowed.contains(key)) {
      throw ConfigError(where.empty() ? key : where + "." + key, "unknown key");
    }
  }
}

double get_number(const Json& j, const std::string& key) {
  if (!j.is_number()) throw ConfigError(key, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw ConfigError(key, "number is not finite");
  return v;
}

int get_int(const Json& j, const std::string& key) {
  if (!j.is_number_integer()) throw ConfigError(key, "expected an integer");
  return j.get<int>();
}

bool get_bool(const Json& j, const std::string& key) {
  if (!j.is_boolean()) throw ConfigError(key, "expected true or false");
  return j.get<bool>();
}

std::string get_string(const Json& j, const std::string& key) {
  if (!j.is_string()) throw ConfigError(key, "expected a string");
  return j.get<std::string>();
}

std::vector<double> get_number_list(const Json& j, const std::string& key) {
  if (!j.is_array()) throw ConfigError(key, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    out.push_back(get_number(j[i], key + "[" + std::to_string(i) + "]"));
  }
  return out;
}

ProfileSpec get_profile(const Json& j, const std::string& key) {
  if (j.is_string()) return ProfileSpec::named(j.get<std::string>());
  if (j.is_array()) return ProfileSpec{"", get_number_list(j, key)};
  throw ConfigError(key, "expected a profile name or an array of nodal samples");
}

Json profile_json(const ProfileSpec& p) {
  if (!p.name.empty()) return p.name;
  return p.samples;
}

bool parse_const(std::string_view name, double& c) {
  constexpr std::string_view prefix = "const(";
  if (!name.starts_with(prefix) || !name.ends_with(")")) return false;
  std::string arg(name.substr(prefix.size(), name.size() - prefix.size() - 1));
  std::istringstream is(arg);
  is.imbue(std::locale::classic());
  is >> c;
  return is && is.eof() && std::isfinite(c);
}

}  // namespace

std::vector<double> resolve_profile(const ProfileSpec& spec, const Grid& grid,
                                    const std::string& key) {
  using std::numbers::pi;
  if (spec.name.empty()) {
    if (spec.samples.size() != grid.size()) {
      throw ConfigError(key, "expected " + std::to_string(grid.size()) +
                                 " nodal samples, got " +
                                 std::to_string(spec.samples.size()));
    }
    for (double s : spec.samples) {
      if (!std::isfinite(s)) throw ConfigError(key, "non-finite sample");
    }
    return spec.samples;
  }
  std::function<double(double)> f;
  double c = 0.0;
  const std::string& n = spec.name;
  if (n == "paper") {
    f = [](double x) { return 2.0 * std::sin(pi * x); };
  } else if (n == "sin2pi") {
    f = [](double x) { return std::sin(2.0 * pi * x); };
  } else if (n == "sin10") {
    f = [](double x) { return std::pow(std::sin(pi * x), 10); };
  } else if (n == "step") {
    f = [](double x) {
      return ((x > 0.5 && x < 0.8) ? 1.0 : 0.0) - ((x > 0.2 && x < 0.5) ? 1.0 : 0.0);
    };
  } else if (n == "mixed") {
    f = [](double x) { return std::sin(pi * x / 3.0) + 0.3 * std::cos(3.75 * pi * x); };
  } else if (n == "zero") {
    f = [](double) { return 0.0; };
  } else if (parse_const(n, c)) {
    f = [c](double) { return c; };
  } else {
    throw ConfigError(key, "unknown profile '" + n + "'");
  }
  std::vector<double> out(grid.size());
  for (int i = 1; i <= grid.n_interior; ++i) out[i - 1] = f(grid.x(i));
  return out;
}

ExperimentConfig parse_config(const std::string& json_text) {
  Json root;
  try {
    root = Json::parse(json_text);
  } catch (const Json::parse_error& e) {
    throw ConfigError("<document>", e.what());
  }
  if (!root.is_object()) throw ConfigError("<document>", "top level must be an object");
  reject_unknown(root,
                 {"grid", "kernel", "control_region", "target", "initial_datum",
                  "initial_data", "beta", "gamma", "cells", "mu", "solver", "output_dir",
                  "workers"},
                 "");

  ExperimentConfig cfg;
  if (root.contains("grid")) {
    const Json& g = root["grid"];
    if (!g.is_object()) throw ConfigError("grid", "expected an object");
    reject_unknown(g, {"N", "M", "T", "nu"}, "grid");
    if (g.contains("N")) cfg.n_interior = get_int(g["N"], "grid.N");
    if (g.contains("M")) cfg.n_steps = get_int(g["M"], "grid.M");
    if (g.contains("T")) cfg.horizon = get_number(g["T"], "grid.T");
    if (g.contains("nu")) cfg.nu = get_number(g["nu"], "grid.nu");
  }
  if (root.contains("kernel")) {
    const Json& k = root["kernel"];
    if (k.is_string()) {
      cfg.kernel = KernelSpec{k.get<std::string>(), {}, {}};
    } else if (k.is_object()) {
      reject_unknown(k, {"k1", "k2"}, "kernel");
      if (!k.contains("k1") || !k.contains("k2")) {
        throw ConfigError("kernel", "inline kernel needs both k1 and k2");
      }
      cfg.kernel = KernelSpec{"", get_number_list(k["k1"], "kernel.k1"),
                              get_number_list(k["k2"], "kernel.k2")};
    } else {
      throw ConfigError("kernel", "expected a kernel name or {\"k1\": [...], \"k2\": [...]}");
    }
  }
  if (root.contains("control_region")) {
    auto r = get_number_list(root["control_region"], "control_region");
    if (r.size() != 2) throw ConfigError("control_region", "expected [a, b]");
    cfg.region_a = r[0];
    cfg.region_b = r[1];
  }
  if (root.contains("target")) cfg.target = get_profile(root["target"], "target");
  if (root.contains("initial_datum")) {
    cfg.initial_datum = get_profile(root["initial_datum"], "initial_datum");
  }
  if (root.contains("initial_data")) {
    const Json& d = root["initial_data"];
    if (!d.is_array()) throw ConfigError("initial_data", "expected an array of profiles");
    cfg.initial_data.clear();
    for (std::size_t i = 0; i < d.size(); ++i) {
      cfg.initial_data.push_back(get_profile(d[i], "initial_data[" + std::to_string(i) + "]"));
    }
  }
  if (root.contains("beta")) cfg.beta = get_number_list(root["beta"], "beta");
  if (root.contains("gamma")) cfg.gamma = get_number_list(root["gamma"], "gamma");
  if (root.contains("cells")) {
    const Json& c = root["cells"];
    if (!c.is_array()) throw ConfigError("cells", "expected an array of [beta, gamma] pairs");
    for (std::size_t i = 0; i < c.size(); ++i) {
      const std::string key = "cells[" + std::to_string(i) + "]";
      auto pair = get_number_list(c[i], key);
      if (pair.size() != 2) throw ConfigError(key, "expected [beta, gamma]");
      cfg.cells.emplace_back(pair[0], pair[1]);
    }
  }
  if (root.contains("mu")) cfg.mu = get_number(root["mu"], "mu");
  if (root.contains("solver")) {
    const Json& s = root["solver"];
    if (!s.is_object()) throw ConfigError("solver", "expected an object");
    reject_unknown(s, {"method", "tol", "max_iter", "step", "post_mask", "linear_solver"},
                   "solver");
    try {
      if (s.contains("method")) {
        cfg.solver.method = solver_method_from_string(get_string(s["method"], "solver.method"));
      }
      if (s.contains("linear_solver")) {
        cfg.linear_solver = linear_solver_from_string(
            get_string(s["linear_solver"], "solver.linear_solver"));
      }
    } catch (const InvalidArgument& e) {
      throw ConfigError("solver", e.what());
    }
    if (s.contains("tol")) cfg.solver.tol = get_number(s["tol"], "solver.tol");
    if (s.contains("max_iter")) cfg.solver.max_iter = get_int(s["max_iter"], "solver.max_iter");
    if (s.contains("step")) cfg.solver.step = get_number(s["step"], "solver.step");
    if (s.contains("post_mask")) {
      cfg.solver.post_mask = get_bool(s["post_mask"], "solver.post_mask");
    }
  }
  if (root.contains("output_dir")) cfg.output_dir = get_string(root["output_dir"], "output_dir");
  if (root.contains("workers")) cfg.workers = get_int(root["workers"], "workers");
  validate(cfg);
  return cfg;
}

void validate(const ExperimentConfig& cfg) {
  if (cfg.n_interior < 1) throw ConfigError("grid.N", "must be >= 1");
  if (cfg.n_steps < 1) throw ConfigError("grid.M", "must be >= 1");
  if (!(cfg.horizon > 0.0)) throw ConfigError("grid.T", "must be positive");
  if (!(cfg.nu >= 0.0)) throw ConfigError("grid.nu", "must be nonnegative");
  const Grid grid = config_grid(cfg);
  if (!cfg.kernel.name.empty()) {
    try {
      (void)kernel_by_name(cfg.kernel.name);
    } catch (const InvalidArgument& e) {
      throw ConfigError("kernel", e.what());
    }
  } else if (cfg.kernel.k1.size() != grid.size() || cfg.kernel.k2.size() != grid.size()) {
    throw ConfigError("kernel", "inline samples must have length N = " +
                                    std::to_string(grid.size()));
  }
  if (!(0.0 <= cfg.region_a && cfg.region_a < cfg.region_b && cfg.region_b <= 1.0)) {
    throw ConfigError("control_region", "must satisfy 0 <= a < b <= 1");
  }
  try {
    (void)assemble_control(grid, cfg.region_a, cfg.region_b);
  } catch (const EmptyControlRegion& e) {
    throw ConfigError("control_region", e.what());
  }
  (void)resolve_profile(cfg.target, grid, "target");
  (void)resolve_profile(cfg.initial_datum, grid, "initial_datum");
  if (cfg.initial_data.empty()) throw ConfigError("initial_data", "list must not be empty");
  for (std::size_t i = 0; i < cfg.initial_data.size(); ++i) {
    (void)resolve_profile(cfg.initial_data[i], grid, "initial_data[" + std::to_string(i) + "]");
  }
  if (cfg.beta.empty()) throw ConfigError("beta", "list must not be empty");
  if (cfg.gamma.empty()) throw ConfigError("gamma", "list must not be empty");
  for (std::size_t i = 0; i < cfg.beta.size(); ++i) {
    if (!(cfg.beta[i] > 0.0)) throw ConfigError("beta[" + std::to_string(i) + "]", "must be > 0");
  }
  for (std::size_t i = 0; i < cfg.gamma.size(); ++i) {
    if (!(cfg.gamma[i] > 0.0)) {
      throw ConfigError("gamma[" + std::to_string(i) + "]", "must be > 0");
    }
  }
  for (std::size_t i = 0; i < cfg.cells.size(); ++i) {
    if (!(cfg.cells[i].first > 0.0) || !(cfg.cells[i].second > 0.0)) {
      throw ConfigError("cells[" + std::to_string(i) + "]", "beta and gamma must be > 0");
    }
  }
  if (!(cfg.mu > 0.0)) throw ConfigError("mu", "must be > 0");
  try {
    validate(cfg.solver);
  } catch (const InvalidArgument& e) {
    throw ConfigError("solver", e.what());
  }
  if (cfg.workers < 1) throw ConfigError("workers", "must be >= 1");
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config file '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string dump_config(const ExperimentConfig& cfg) {
  Json root;
  root["grid"] = {{"N", cfg.n_interior}, {"M", cfg.n_steps}, {"T", cfg.horizon}, {"nu", cfg.nu}};
  if (!cfg.kernel.name.empty()) {
    root["kernel"] = cfg.kernel.name;
  } else {
    root["kernel"] = {{"k1", cfg.kernel.k1}, {"k2", cfg.kernel.k2}};
  }
  root["control_region"] = {cfg.region_a, cfg.region_b};
  root["target"] = profile_json(cfg.target);
  root["initial_datum"] = profile_json(cfg.initial_datum);
  Json data = Json::array();
  for (const auto& p : cfg.initial_data) data.push_back(profile_json(p));
  root["initial_data"] = data;
  root["beta"] = cfg.beta;
  root["gamma"] = cfg.gamma;
  if (!cfg.cells.empty()) {
    Json cells = Json::array();
    for (const auto& [b, g] : cfg.cells) cells.push_back({b, g});
    root["cells"] = cells;
  }
  root["mu"] = cfg.mu;
  root["solver"] = {{"method", std::string(to_string(cfg.solver.method))},
                    {"tol", cfg.solver.tol},
                    {"max_iter", cfg.solver.max_iter},
                    {"step", cfg.solver.step},
                    {"post_mask", cfg.solver.post_mask},
                    {"linear_solver", std::string(to_string(cfg.linear_solver))}};
  root["output_dir"] = cfg.output_dir;
  root["workers"] = cfg.workers;
  return root.dump(2) + "\n";
}

void save_config(const std::filesystem::path& path, const ExperimentConfig& cfg) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write config file '" + path.string() + "'");
  out << dump_config(cfg);
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

Grid config_grid(const ExperimentConfig& cfg) {
  return build_grid(cfg.n_interior, cfg.n_steps, cfg.horizon, cfg.nu);
}

DiscreteSystem build_system(const ExperimentConfig& cfg) {
  const Grid grid = config_grid(cfg);
  SeparatedKernel kernel = cfg.kernel.name.empty()
                               ? kernel_from_samples(cfg.kernel.k1, cfg.kernel.k2, grid)
                               : sample_kernel(kernel_by_name(cfg.kernel.name), grid);
  return make_system(grid, kernel, assemble_control(grid, cfg.region_a, cfg.region_b),
                     cfg.linear_solver);
}

std::vector<std::pair<double, double>> sweep_cells(const ExperimentConfig& cfg) {
  if (!cfg.cells.empty()) return cfg.cells;
  std::vector<std::pair<double, double>> cells;
  for (double b : cfg.beta)
    for (double g : cfg.gamma) cells.emplace_back(b, g);
  return cells;
}

}  // namespace nlheat
