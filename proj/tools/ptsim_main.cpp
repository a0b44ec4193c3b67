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

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <thread>

#include <CLI11.hpp>

#include "ptsim/app/presets.hpp"
#include "ptsim/app/runner.hpp"

namespace {

using ptsim::app::ExitCode;

int code(ExitCode c) { return static_cast<int>(c); }

int list_presets() {
  for (const auto& p : ptsim::app::presets()) std::cout << p.name << '\n';
  return 0;
}

int show_preset(const std::string& name) {
  const auto text = ptsim::app::find_preset(name);
  if (!text) {
    std::cerr << "ptsim: config error: unknown preset '" << name << "'\n";
    return code(ExitCode::Config);
  }
  std::cout << *text;
  return 0;
}

int write_presets(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    std::cerr << "ptsim: i/o error: cannot create " << dir.string() << ": " << ec.message() << '\n';
    return code(ExitCode::Io);
  }
  for (const auto& p : ptsim::app::presets()) {
    const auto path = dir / (std::string(p.name) + ".json");
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    os << p.text;
    if (!os.flush()) {
      std::cerr << "ptsim: i/o error: failed writing " << path.string() << '\n';
      return code(ExitCode::Io);
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simulate PT-symmetric two-level dynamics through a one-qubit dilation"};
  app.require_subcommand(1);

  std::string scenario;
  std::string out;
  auto* run = app.add_subcommand("run", "Run one scenario file or preset");
  run->add_option("--scenario", scenario, "Scenario JSON path or preset name")->required();
  run->add_option("--out", out, "Output directory")->required();

  std::string sweep_dir;
  std::string sweep_out;
  int jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  auto* sweep = app.add_subcommand("sweep", "Run every *.json scenario in a directory");
  sweep->add_option("--dir", sweep_dir, "Directory of scenario files")->required();
  sweep->add_option("--out", sweep_out, "Output root; one subdirectory per scenario")->required();
  sweep->add_option("--jobs", jobs, "Concurrent scenarios")->check(CLI::PositiveNumber);

  bool list = false;
  std::string show;
  std::string write_dir;
  auto* presets = app.add_subcommand("presets", "Inspect the built-in scenarios");
  presets->add_flag("--list", list, "Print preset names");
  presets->add_option("--show", show, "Print one preset document");
  presets->add_option("--write", write_dir, "Write all presets as <name>.json into a directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : code(ExitCode::Config);
  }

  if (*run) return code(ptsim::app::run_scenario_file(scenario, out, std::cerr));
  if (*sweep) return code(ptsim::app::run_sweep(sweep_dir, sweep_out, jobs, std::cerr));
  if (!show.empty()) return show_preset(show);
  if (!write_dir.empty()) return write_presets(write_dir);
  return list_presets();
}
