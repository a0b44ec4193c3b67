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
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ptsim/hamiltonian.hpp"
#include "ptsim/magnus.hpp"
#include "ptsim/vdms.hpp"

namespace ptsim::app {

using numkit::ComplexMatrix;

/// Schema violation in a scenario document.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Route { Dilation, Combination, Both, Master };
enum class ChannelMode { Combined, Separate };

const char* to_string(Route route) noexcept;

struct Scenario {
  std::string name;

  // Exactly one of the two is set.
  std::optional<hamiltonian::PTModel> model;
  std::vector<ComplexMatrix> coefficients;

  double m0_scale = hamiltonian::kDefaultMetricScale;
  bool m0_metric = false;  // M0 = metric_unbroken(H_S, m0_scale) instead of scale * I

  std::string initial_name = "pure0";  // pure0 | mixed | matrix
  ComplexMatrix initial_raw;

  std::vector<vdms::NoiseChannel> channels;
  ChannelMode channel_mode = ChannelMode::Combined;
  magnus::MagnusOptions magnus;
  double t_max = 8.0;
  double sample_dt = 0.02;
  Route route = Route::Both;

  hamiltonian::Generator generator() const;
  ComplexMatrix m0() const;
  /// Initial state scaled so that Tr(M0 rho) = 1.
  ComplexMatrix initial_state() const;
  /// The closed-form population applies: two-level model at theta = pi/2,
  /// s = 1, starting from |0>.
  bool has_analytic_reference() const;
};

/// Parses and validates a scenario document. Throws ConfigError.
Scenario parse_scenario(const nlohmann::json& doc, std::string fallback_name = "scenario");
Scenario load_scenario(const std::filesystem::path& path);

}  // namespace ptsim::app
