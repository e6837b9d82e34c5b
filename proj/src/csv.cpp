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

#include <charconv>
#include <fstream>
#include <sstream>
#include <string>

#include "nlheat/error.hpp"
#include "nlheat/experiment.hpp"

namespace nlheat {

std::string format_number(double x) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  if (ec != std::errc()) throw FormatError("cannot format number");
  return std::string(buf, ptr);
}

void write_csv(const std::filesystem::path& path, const CsvTable& table) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  auto write_row = [&](const std::vector<std::string>& row) {
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (j) out << ',';
      out << row[j];
    }
    out << '\n';
  };
  write_row(table.header);
  for (const auto& row : table.rows) write_row(row);
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  CsvTable table;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (line.back() == ',') cells.emplace_back();
    if (first) {
      table.header = std::move(cells);
      first = false;
    } else {
      table.rows.push_back(std::move(cells));
    }
  }
  if (first) throw FormatError("'" + path.string() + "' is empty");
  return table;
}

double parse_csv_number(const std::string& cell, const std::filesystem::path& path,
                        std::size_t line, std::size_t column) {
  double v = 0.0;
  const char* begin = cell.data();
  const char* end = cell.data() + cell.size();
  auto [ptr, ec] = std::from_chars(begin, end, v);
  if (ec != std::errc() || ptr != end) {
    throw FormatError(path.string() + ":" + std::to_string(line) + ": column " +
                      std::to_string(column) + ": malformed number '" + cell + "'");
  }
  return v;
}

namespace {

std::vector<std::string> node_header(const Grid& grid) {
  std::vector<std::string> header{"t"};
  for (int i = 1; i <= grid.n_interior; ++i) header.push_back(format_number(grid.x(i)));
  return header;
}

std::vector<std::string> numeric_row(double key, std::span<const double> values) {
  std::vector<std::string> row;
  row.reserve(values.size() + 1);
  row.push_back(format_number(key));
  for (double v : values) row.push_back(format_number(v));
  return row;
}

}  // namespace

CsvTable trajectory_table(const Trajectory& y) {
  const Grid& g = y.grid();
  CsvTable t{node_header(g), {}};
  for (int n = 0; n <= g.n_steps; ++n) t.rows.push_back(numeric_row(g.t(n), y.state(n)));
  return t;
}

CsvTable time_grid_table(const TimeGridFunction& f) {
  const Grid& g = f.grid();
  CsvTable t{node_header(g), {}};
  for (int n = 1; n <= g.n_steps; ++n) t.rows.push_back(numeric_row(g.t(n), f.slice(n - 1)));
  return t;
}

CsvTable convergence_table(const std::vector<double>& residual_history) {
  CsvTable t{{"iteration", "relative_residual"}, {}};
  for (std::size_t k = 0; k < residual_history.size(); ++k) {
    t.rows.push_back({std::to_string(k), format_number(residual_history[k])});
  }
  return t;
}

TimeGridFunction read_control_csv(const std::filesystem::path& path, const Grid& grid) {
  CsvTable t = read_csv(path);
  const std::size_t want_rows = grid.steps();
  const std::size_t want_cols = grid.size() + 1;
  auto shape_error = [&](std::size_t rows, std::size_t cols) {
    return FormatError("control file '" + path.string() + "': expected " +
                       std::to_string(want_rows) + " rows x " + std::to_string(want_cols) +
                       " columns, found " + std::to_string(rows) + " rows x " +
                       std::to_string(cols) + " columns");
  };
  if (t.rows.size() != want_rows || t.header.size() != want_cols) {
    throw shape_error(t.rows.size(), t.header.size());
  }
  TimeGridFunction v(grid);
  for (std::size_t r = 0; r < want_rows; ++r) {
    if (t.rows[r].size() != want_cols) throw shape_error(t.rows.size(), t.rows[r].size());
    auto slice = v.slice(r);
    for (std::size_t c = 1; c < want_cols; ++c) {
      slice[c - 1] = parse_csv_number(t.rows[r][c], path, r + 2, c + 1);
    }
  }
  return v;
}

}  // namespace nlheat
