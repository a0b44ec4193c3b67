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

#include "ptsim/app/runner.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <memory>
#include <mutex>
#include <sstream>
#include <thread>

#include "ptsim/app/presets.hpp"
#include "ptsim/dilation.hpp"
#include "ptsim/evolution.hpp"
#include "ptsim/vdms.hpp"

namespace ptsim::app {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

void append_number(std::string& out, double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  out += buf;
}

void append_cell(std::string& out, const std::optional<double>& v) {
  out += ',';
  if (v) append_number(out, *v);
}

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

// Frame-derived columns shared by every route's CSV.
struct SampleInfo {
  double t;
  std::vector<double> energies;
  double min_eig_m;
  dilation::DilationFrame frame;
};

std::vector<SampleInfo> sample_frames(const Scenario& sc, const std::vector<double>& grid,
                                      std::optional<double> legitimacy) {
  dilation::MetricFlow flow(sc.generator(), sc.m0(), sc.magnus);
  std::vector<SampleInfo> out;
  out.reserve(grid.size());
  for (double t : grid) {
    if (legitimacy && t >= *legitimacy) break;
    dilation::DilationFrame frame;
    try {
      frame = flow.frame(t);
    } catch (const Error& e) {
      // Only the approach to T_l may cut the grid short.
      if (legitimacy && e.kind() == ErrorKind::LegitimacyViolated) break;
      throw;
    }
    const numkit::RealVector e = dilation::dilated_spectrum_descending(frame);
    SampleInfo info{t, std::vector<double>(e.data(), e.data() + e.size()),
                    numkit::herm_eig(frame.m, 1e-9).values.minCoeff(), std::move(frame)};
    out.push_back(std::move(info));
  }
  return out;
}

CsvTable build_table(const Scenario& sc, const std::vector<SampleInfo>& samples,
                     const evolution::Trajectory& traj, const evolution::Trajectory* reference,
                     bool noiseless) {
  CsvTable table;
  table.n_energies = samples.empty() ? 4 : samples.front().energies.size();
  const bool analytic = noiseless && sc.has_analytic_reference();
  for (std::size_t k = 0; k < samples.size(); ++k) {
    CsvRow row;
    row.t = samples[k].t;
    const evolution::MeasurementRecord rec = evolution::project_measure(traj.rho[k], row.t);
    row.p0 = rec.p0;
    row.pn0 = rec.pn0;
    if (analytic) row.pn0_analytic = evolution::analytic_pn0(sc.model->r, row.t);
    if (reference) row.delta_rho = evolution::delta_rho(traj.rho[k], reference->rho[k]);
    row.energies = samples[k].energies;
    row.min_eig_m = samples[k].min_eig_m;
    table.rows.push_back(std::move(row));
  }
  return table;
}

std::optional<double> max_delta(const CsvTable& table) {
  std::optional<double> best;
  for (const auto& row : table.rows) {
    if (row.delta_rho) best = std::max(best.value_or(0.0), *row.delta_rho);
  }
  return best;
}

}  // namespace

std::string format_csv(const CsvTable& table) {
  std::string out = "t,P0,PN0,PN0_analytic,delta_rho";
  for (std::size_t i = 1; i <= table.n_energies; ++i) out += ",E" + std::to_string(i);
  out += ",min_eig_M\n";
  for (const auto& row : table.rows) {
    append_number(out, row.t);
    append_cell(out, row.p0);
    append_cell(out, row.pn0);
    append_cell(out, row.pn0_analytic);
    append_cell(out, row.delta_rho);
    for (std::size_t i = 0; i < table.n_energies; ++i) {
      append_cell(out, i < row.energies.size() ? std::optional<double>(row.energies[i])
                                               : std::nullopt);
    }
    append_cell(out, row.min_eig_m);
    out += '\n';
  }
  return out;
}

void emit_csv(const CsvTable& table, const fs::path& path) {
  if (table.rows.empty()) throw IoError("refusing to write an empty trajectory to " + path.string());
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw IoError("cannot open " + path.string() + " for writing");
  os << format_csv(table);
  if (!os.flush()) throw IoError("failed writing " + path.string());
}

json RunSummary::to_json() const {
  json outs = json::array();
  for (const auto& o : outputs) {
    outs.push_back({{"label", o.label},
                    {"file", o.file},
                    {"max_delta_rho", optional_number(o.max_delta_rho)},
                    {"max_norm_lindbladian", optional_number(o.max_norm_lindbladian)}});
  }
  std::optional<double> worst_delta;
  std::optional<double> worst_l;
  for (const auto& o : outputs) {
    if (o.max_delta_rho) worst_delta = std::max(worst_delta.value_or(0.0), *o.max_delta_rho);
    if (o.max_norm_lindbladian) {
      worst_l = std::max(worst_l.value_or(0.0), *o.max_norm_lindbladian);
    }
  }
  return {{"scenario", scenario},
          {"route", to_string(route)},
          {"phase", phase},
          {"legitimacy_time", optional_number(legitimacy_time)},
          {"truncated", truncated},
          {"t_end", t_end},
          {"samples", samples},
          {"max_norm_h_as", max_norm_h_as},
          {"max_norm_lindbladian", optional_number(worst_l)},
          {"max_delta_rho", optional_number(worst_delta)},
          {"outputs", outs},
          {"wall_time_s", wall_time_s}};
}

RunSummary run_scenario(const Scenario& sc, const fs::path& out_dir) {
  const auto start = std::chrono::steady_clock::now();
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create " + out_dir.string() + ": " + ec.message());

  const hamiltonian::Generator hs = sc.generator();
  const numkit::ComplexMatrix m0 = sc.m0();
  const numkit::ComplexMatrix rho0 = sc.initial_state();

  RunSummary summary;
  summary.scenario = sc.name;
  summary.route = sc.route;
  summary.phase = sc.model ? hamiltonian::to_string(hamiltonian::classify_phase(*sc.model).phase)
                           : "generator";
  summary.legitimacy_time = dilation::legitimacy_time(hs, m0, sc.t_max, sc.magnus);

  const std::vector<double> full_grid = evolution::sample_grid(sc.t_max, sc.sample_dt);
  const std::vector<SampleInfo> samples = sample_frames(sc, full_grid, summary.legitimacy_time);
  if (samples.empty()) throw Error(ErrorKind::LegitimacyViolated, "no legitimate sample at t = 0");
  std::vector<double> grid;
  grid.reserve(samples.size());
  for (const auto& s : samples) grid.push_back(s.t);
  summary.truncated = grid.size() < full_grid.size();
  summary.t_end = grid.back();
  summary.samples = grid.size();
  for (const auto& s : samples) {
    summary.max_norm_h_as = std::max(summary.max_norm_h_as, numkit::spectral_norm(s.frame.h_as));
  }

  const bool want_combination = sc.route != Route::Dilation;
  const bool want_dilation = sc.route != Route::Combination;
  std::optional<evolution::Trajectory> combination;
  std::optional<evolution::Trajectory> dilated;
  if (want_combination) combination = evolution::evolve_combination(hs, m0, rho0, grid, sc.magnus);
  if (want_dilation) dilated = evolution::evolve_dilation(hs, m0, rho0, grid, sc.magnus);

  auto write = [&](const std::string& label, const evolution::Trajectory& traj,
                   const evolution::Trajectory* reference, std::optional<double> l_norm) {
    const CsvTable table = build_table(sc, samples, traj, reference, !l_norm.has_value());
    const std::string file = label + ".csv";
    emit_csv(table, out_dir / file);
    summary.outputs.push_back({label, file, max_delta(table), l_norm});
  };

  // Delta_rho compares the two noiseless routes; noisy runs leave it empty.
  const evolution::Trajectory* ref = combination ? &*combination : nullptr;
  if (combination) write("combination", *combination, dilated ? &*dilated : nullptr, std::nullopt);
  if (dilated) write("dilation", *dilated, ref, std::nullopt);

  if (sc.route == Route::Master) {
    std::vector<std::pair<std::string, std::vector<vdms::NoiseChannel>>> groups;
    if (sc.channel_mode == ChannelMode::Combined) {
      groups.emplace_back("master", sc.channels);
    } else {
      for (const auto& ch : sc.channels) {
        std::string label = std::string("master_") + vdms::to_string(ch.kind);
        if (ch.target == vdms::ChannelTarget::Auxiliary) label += "_aux";
        groups.emplace_back(std::move(label), std::vector<vdms::NoiseChannel>{ch});
      }
    }
    const numkit::ComplexMatrix rho_as0 = evolution::embed(rho0, samples.front().frame.xi).rho_as;
    for (const auto& [label, channels] : groups) {
      auto flow = std::make_shared<dilation::MetricFlow>(hs, m0, sc.magnus);
      const magnus::MatrixSource h_as(2 * hs.dim(),
                                      [flow](double t) { return flow->frame(t).h_as; });
      const magnus::MatrixSource lindblad = vdms::lindbladian(h_as, channels);
      const evolution::Trajectory traj = vdms::evolve_master(lindblad, rho_as0, grid, sc.magnus);
      double l_norm = 0.0;
      for (const auto& s : samples) {
        l_norm = std::max(l_norm, numkit::spectral_norm(vdms::lindbladian_at(s.frame.h_as, channels)));
      }
      write(label, traj, nullptr, l_norm);
    }
  }

  summary.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const fs::path summary_path = out_dir / "summary.json";
  std::ofstream os(summary_path, std::ios::binary | std::ios::trunc);
  if (!os) throw IoError("cannot open " + summary_path.string() + " for writing");
  os << summary.to_json().dump(2) << '\n';
  if (!os.flush()) throw IoError("failed writing " + summary_path.string());
  return summary;
}

Scenario resolve_scenario(const std::string& ref) {
  std::error_code ec;
  if (fs::is_regular_file(ref, ec)) return load_scenario(ref);
  if (const auto text = find_preset(ref)) {
    json doc;
    try {
      doc = json::parse(*text);
    } catch (const json::exception& e) {
      throw ConfigError("preset " + ref + ": " + e.what());
    }
    return parse_scenario(doc, ref);
  }
  throw IoError("no scenario file or preset named '" + ref + "'");
}

ExitCode run_scenario_file(const std::string& scenario_ref, const fs::path& out_dir,
                           std::ostream& diag) {
  try {
    const Scenario sc = resolve_scenario(scenario_ref);
    const RunSummary summary = run_scenario(sc, out_dir);
    if (summary.truncated) {
      diag << "ptsim: " << sc.name << ": truncated at T_l = " << *summary.legitimacy_time
           << " (last sample t = " << summary.t_end << ")\n";
    }
    return ExitCode::Ok;
  } catch (const ConfigError& e) {
    diag << "ptsim: config error: " << scenario_ref << ": " << e.what() << '\n';
    return ExitCode::Config;
  } catch (const IoError& e) {
    diag << "ptsim: i/o error: " << e.what() << '\n';
    return ExitCode::Io;
  } catch (const fs::filesystem_error& e) {
    diag << "ptsim: i/o error: " << e.what() << '\n';
    return ExitCode::Io;
  } catch (const Error& e) {
    diag << "ptsim: numeric error: " << scenario_ref << ": " << e.what() << '\n';
    return ExitCode::Numeric;
  }
}

ExitCode run_sweep(const fs::path& dir, const fs::path& out, int jobs, std::ostream& diag) {
  std::vector<fs::path> files;
  std::error_code ec;
  for (fs::directory_iterator it(dir, ec), end; !ec && it != end; it.increment(ec)) {
    if (it->is_regular_file() && it->path().extension() == ".json") files.push_back(it->path());
  }
  if (ec) {
    diag << "ptsim: i/o error: cannot list " << dir.string() << ": " << ec.message() << '\n';
    return ExitCode::Io;
  }
  std::sort(files.begin(), files.end());

  std::vector<ExitCode> codes(files.size(), ExitCode::Ok);
  std::vector<std::string> messages(files.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < files.size(); i = next++) {
      std::ostringstream local;
      codes[i] = run_scenario_file(files[i].string(), out / files[i].stem(), local);
      messages[i] = local.str();
    }
  };
  const int n_threads = std::max(1, std::min<int>(jobs, static_cast<int>(files.size())));
  std::vector<std::jthread> pool;
  for (int i = 0; i < n_threads; ++i) pool.emplace_back(worker);
  pool.clear();

  ExitCode worst = ExitCode::Ok;
  for (std::size_t i = 0; i < files.size(); ++i) {
    diag << messages[i];
    if (static_cast<int>(codes[i]) > static_cast<int>(worst)) worst = codes[i];
  }
  return worst;
}

}  // namespace ptsim::app
