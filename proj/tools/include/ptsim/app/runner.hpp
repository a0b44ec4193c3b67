// Copyright 2026 The ptsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ptsim/app/scenario.hpp"

namespace ptsim::app {

enum class ExitCode : int { Ok = 0, Config = 2, Numeric = 3, Io = 4 };

struct CsvRow {
  double t = 0.0;
  std::optional<double> p0;
  std::optional<double> pn0;
  std::optional<double> pn0_analytic;
  std::optional<double> delta_rho;
  std::vector<double> energies;  // H_AS eigenvalues, descending
  std::optional<double> min_eig_m;
};

struct CsvTable {
  std::size_t n_energies = 4;
  std::vector<CsvRow> rows;
};

/// Header plus one line per row; numbers use 12 significant digits and
/// inapplicable cells are left empty.
std::string format_csv(const CsvTable& table);
void emit_csv(const CsvTable& table, const std::filesystem::path& path);

struct RouteOutput {
  std::string label;  // combination, dilation, master_AD, ...
  std::string file;
  std::optional<double> max_delta_rho;
  std::optional<double> max_norm_lindbladian;
};

struct RunSummary {
  std::string scenario;
  Route route = Route::Both;
  std::string phase;
  std::optional<double> legitimacy_time;
  bool truncated = false;
  double t_end = 0.0;
  std::size_t samples = 0;
  double max_norm_h_as = 0.0;
  std::vector<RouteOutput> outputs;
  double wall_time_s = 0.0;

  nlohmann::json to_json() const;
};

/// Runs every requested route, writes one CSV per route plus summary.json
/// into out_dir. Library errors propagate as exceptions.
RunSummary run_scenario(const Scenario& scenario, const std::filesystem::path& out_dir);

/// An existing file path is loaded from disk; otherwise `ref` names a
/// built-in preset. Throws IoError when neither applies.
Scenario resolve_scenario(const std::string& ref);

/// Resolves, runs and maps failures to exit codes, writing one diagnostic
/// line to `diag` on error.
ExitCode run_scenario_file(const std::string& scenario_ref,
                           const std::filesystem::path& out_dir, std::ostream& diag);

/// Runs every *.json in `dir` into out/<stem>/ with up to `jobs` threads.
/// Returns the most severe exit code encountered.
ExitCode run_sweep(const std::filesystem::path& dir, const std::filesystem::path& out, int jobs,
                   std::ostream& diag);

}  // namespace ptsim::app
