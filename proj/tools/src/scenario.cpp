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

#include "ptsim/app/scenario.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <set>

#include "ptsim/evolution.hpp"

namespace ptsim::app {

using nlohmann::json;
using numkit::Complex;

const char* to_string(Route route) noexcept {
  switch (route) {
    case Route::Dilation: return "dilation";
    case Route::Combination: return "combination";
    case Route::Both: return "both";
    case Route::Master: return "master";
  }
  return "?";
}

namespace {

void reject_unknown_keys(const json& obj, const std::set<std::string>& allowed, const char* where) {
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.contains(key)) {
      throw ConfigError(std::string("unknown key '") + key + "' in " + where);
    }
  }
}

double number(const json& obj, const char* key, const char* where) {
  const auto it = obj.find(key);
  if (it == obj.end()) throw ConfigError(std::string("missing '") + key + "' in " + where);
  if (!it->is_number()) throw ConfigError(std::string("'") + key + "' must be a number");
  const double v = it->get<double>();
  if (!std::isfinite(v)) throw ConfigError(std::string("'") + key + "' must be finite");
  return v;
}

double number_or(const json& obj, const char* key, double fallback, const char* where) {
  return obj.contains(key) ? number(obj, key, where) : fallback;
}

Complex parse_entry(const json& e) {
  if (e.is_number()) return {e.get<double>(), 0.0};
  if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number()) {
    return {e[0].get<double>(), e[1].get<double>()};
  }
  throw ConfigError("matrix entries must be numbers or [re, im] pairs");
}

ComplexMatrix parse_matrix(const json& rows, const char* what) {
  if (!rows.is_array() || rows.empty()) {
    throw ConfigError(std::string(what) + " must be a non-empty list of rows");
  }
  const auto n = static_cast<numkit::Index>(rows.size());
  ComplexMatrix m(n, n);
  for (numkit::Index i = 0; i < n; ++i) {
    const json& row = rows[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<numkit::Index>(row.size()) != n) {
      throw ConfigError(std::string(what) + " must be square");
    }
    for (numkit::Index j = 0; j < n; ++j) m(i, j) = parse_entry(row[static_cast<std::size_t>(j)]);
  }
  if (!numkit::all_finite(m)) throw ConfigError(std::string(what) + " has non-finite entries");
  return m;
}

Route parse_route(const std::string& s) {
  if (s == "dilation") return Route::Dilation;
  if (s == "combination") return Route::Combination;
  if (s == "both") return Route::Both;
  if (s == "master") return Route::Master;
  throw ConfigError("unknown route '" + s + "'");
}

}  // namespace

hamiltonian::Generator Scenario::generator() const {
  if (model) return hamiltonian::two_level(*model);
  return hamiltonian::Generator(coefficients);
}

ComplexMatrix Scenario::m0() const {
  const hamiltonian::Generator g = generator();
  if (m0_metric) {
    if (!g.is_time_independent()) {
      throw ConfigError("m0.metric requires a time-independent Hamiltonian");
    }
    return hamiltonian::metric_unbroken(g(0.0), m0_scale);
  }
  return m0_scale * numkit::identity(g.dim());
}

ComplexMatrix Scenario::initial_state() const {
  return evolution::normalize_initial(initial_raw, m0());
}

bool Scenario::has_analytic_reference() const {
  if (!model || initial_name != "pure0") return false;
  return std::abs(model->theta - 0.5 * std::numbers::pi) < 1e-12 && std::abs(model->s - 1.0) < 1e-12;
}

namespace {

Scenario parse_impl(const json& doc, std::string fallback_name) {
  if (!doc.is_object()) throw ConfigError("scenario must be a JSON object");
  reject_unknown_keys(doc,
                      {"name", "description", "model", "generator", "m0", "initial_state",
                       "channels", "channel_mode", "magnus", "t_max", "sample_dt", "route"},
                      "scenario");
  Scenario sc;
  sc.name = doc.value("name", fallback_name);

  const bool has_model = doc.contains("model");
  const bool has_generator = doc.contains("generator");
  if (has_model == has_generator) {
    throw ConfigError("exactly one of 'model' or 'generator' must be given");
  }
  if (has_model) {
    const json& m = doc["model"];
    if (!m.is_object()) throw ConfigError("'model' must be an object");
    reject_unknown_keys(m, {"r", "s", "theta"}, "model");
    hamiltonian::PTModel pt{number(m, "r", "model"), number(m, "s", "model"),
                            number(m, "theta", "model")};
    try {
      pt.validate();
    } catch (const Error& e) {
      throw ConfigError(e.what());
    }
    sc.model = pt;
  } else {
    const json& g = doc["generator"];
    if (!g.is_array() || g.empty()) {
      throw ConfigError("'generator' must be a non-empty list of coefficient matrices");
    }
    for (const auto& c : g) sc.coefficients.push_back(parse_matrix(c, "generator coefficient"));
  }

  if (doc.contains("m0")) {
    const json& m0 = doc["m0"];
    if (!m0.is_object()) throw ConfigError("'m0' must be an object");
    reject_unknown_keys(m0, {"scale", "metric"}, "m0");
    sc.m0_scale = number_or(m0, "scale", sc.m0_scale, "m0");
    sc.m0_metric = m0.value("metric", false);
  }

  const json init = doc.value("initial_state", json("pure0"));
  if (init.is_string()) {
    sc.initial_name = init.get<std::string>();
    ComplexMatrix raw;
    if (sc.initial_name == "pure0") {
      raw = ComplexMatrix::Zero(2, 2);
      raw(0, 0) = 1.0;
    } else if (sc.initial_name == "mixed") {
      raw.resize(2, 2);
      raw << 4.0, 1.0, 1.0, 2.0;
      raw /= 6.0;
    } else {
      throw ConfigError("unknown initial_state '" + sc.initial_name + "'");
    }
    sc.initial_raw = raw;
  } else if (init.is_object()) {
    reject_unknown_keys(init, {"matrix"}, "initial_state");
    if (!init.contains("matrix")) throw ConfigError("initial_state object needs 'matrix'");
    sc.initial_name = "matrix";
    sc.initial_raw = parse_matrix(init["matrix"], "initial_state.matrix");
  } else {
    throw ConfigError("'initial_state' must be a name or an object");
  }

  if (doc.contains("channels")) {
    const json& chs = doc["channels"];
    if (!chs.is_array()) throw ConfigError("'channels' must be a list");
    for (const auto& c : chs) {
      if (!c.is_object()) throw ConfigError("channel entries must be objects");
      reject_unknown_keys(c, {"kind", "gamma", "target"}, "channel");
      if (!c.contains("kind") || !c["kind"].is_string()) {
        throw ConfigError("channel needs a string 'kind'");
      }
      vdms::NoiseChannel ch;
      try {
        ch.kind = vdms::parse_channel_kind(c["kind"].get<std::string>());
        ch.target = vdms::parse_channel_target(c.value("target", std::string("main")));
      } catch (const Error& e) {
        throw ConfigError(e.what());
      }
      ch.gamma = number(c, "gamma", "channel");
      if (ch.gamma < 0.0) throw ConfigError("channel gamma must be >= 0");
      sc.channels.push_back(ch);
    }
  }
  const std::string mode = doc.value("channel_mode", std::string("combined"));
  if (mode == "combined") {
    sc.channel_mode = ChannelMode::Combined;
  } else if (mode == "separate") {
    sc.channel_mode = ChannelMode::Separate;
  } else {
    throw ConfigError("unknown channel_mode '" + mode + "'");
  }

  if (doc.contains("magnus")) {
    const json& mg = doc["magnus"];
    if (!mg.is_object()) throw ConfigError("'magnus' must be an object");
    reject_unknown_keys(mg, {"order", "h", "quad_nodes", "enforce_convergence"}, "magnus");
    sc.magnus.order = mg.value("order", sc.magnus.order);
    sc.magnus.h = number_or(mg, "h", sc.magnus.h, "magnus");
    sc.magnus.quad_nodes = mg.value("quad_nodes", sc.magnus.quad_nodes);
    sc.magnus.enforce_convergence = mg.value("enforce_convergence", true);
  }
  sc.t_max = number_or(doc, "t_max", sc.t_max, "scenario");
  sc.sample_dt = number_or(doc, "sample_dt", sc.sample_dt, "scenario");
  sc.route = parse_route(doc.value("route", std::string("both")));

  // Semantic checks.
  try {
    sc.magnus.validate();
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
  if (!(sc.t_max > 0.0)) throw ConfigError("t_max must be positive");
  if (!(sc.sample_dt > 0.0)) throw ConfigError("sample_dt must be positive");
  {
    const double ratio = sc.sample_dt >= sc.magnus.h ? sc.sample_dt / sc.magnus.h
                                                     : sc.magnus.h / sc.sample_dt;
    if (sc.sample_dt < sc.magnus.h && std::abs(ratio - std::round(ratio)) > 1e-9 * ratio) {
      throw ConfigError("sample_dt smaller than magnus.h must divide it evenly");
    }
  }
  if (!(sc.m0_scale > 1.0)) throw ConfigError("m0.scale must exceed 1");
  if (sc.route == Route::Master && sc.channels.empty()) {
    throw ConfigError("route 'master' needs at least one channel");
  }
  try {
    const hamiltonian::Generator g = sc.generator();
    if (sc.initial_raw.rows() != g.dim()) {
      throw ConfigError("initial_state dimension differs from the Hamiltonian");
    }
    const ComplexMatrix m0 = sc.m0();
    dilation::validate_initial_metric(m0, g.dim());
    (void)sc.initial_state();
    for (const auto& ch : sc.channels) (void)ch.jump_operators(g.dim());
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
  return sc;
}

}  // namespace

Scenario parse_scenario(const json& doc, std::string fallback_name) {
  try {
    return parse_impl(doc, std::move(fallback_name));
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed scenario: ") + e.what());
  }
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open scenario file " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError("invalid JSON in " + path.string() + ": " + e.what());
  }
  return parse_scenario(doc, path.stem().string());
}

}  // namespace ptsim::app
