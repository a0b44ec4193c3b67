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

#include <span>
#include <vector>

#include "ptsim/dilation.hpp"
#include "ptsim/hamiltonian.hpp"
#include "ptsim/magnus.hpp"
#include "ptsim/numkit.hpp"

namespace ptsim::evolution {

using hamiltonian::Generator;
using magnus::MagnusOptions;
using numkit::ComplexMatrix;
using numkit::Index;

/// Density operators sampled along a time grid.
struct Trajectory {
  std::vector<double> t;
  std::vector<ComplexMatrix> rho;

  std::size_t size() const { return t.size(); }
  bool empty() const { return t.empty(); }
};

struct Embedding {
  ComplexMatrix rho_as;       // [I; xi] rho_S [I, xi^dagger]
  ComplexMatrix rho_as_perp;  // [-xi^dagger; I] rho_S [-xi, I]
};

Embedding embed(const ComplexMatrix& rho_s, const ComplexMatrix& xi);

/// Scales rho_raw so that Tr(M0 rho) = 1.
ComplexMatrix normalize_initial(const ComplexMatrix& rho_raw, const ComplexMatrix& m0);

/// rho_S(t) = U rho_S0 U^dagger with U the Magnus propagator of -i H_S, then
/// embedded with xi(t) = sqrt(M(t) - I).
Trajectory evolve_combination(const Generator& hs, const ComplexMatrix& m0,
                              const ComplexMatrix& rho_s0, std::span<const double> t_grid,
                              const MagnusOptions& opts);

/// Cumulative unitaries of -i H_AS(t) at every sample time; H_AS is rebuilt
/// from a fresh frame at each quadrature node.
std::vector<ComplexMatrix> dilated_propagators(const Generator& hs, const ComplexMatrix& m0,
                                               std::span<const double> t_grid,
                                               const MagnusOptions& opts);

Trajectory evolve_dilation(const Generator& hs, const ComplexMatrix& m0,
                           const ComplexMatrix& rho_s0, std::span<const double> t_grid,
                           const MagnusOptions& opts);

struct MeasurementRecord {
  double t = 0.0;
  double p0 = 0.0;
  double pn0 = 0.0;
  ComplexMatrix rho_s;
  ComplexMatrix rho_s_n;
};

/// Post-selection on |0>_A: rho_S is the top-left block, P0 its trace.
MeasurementRecord project_measure(const ComplexMatrix& rho_as, double t = 0.0);

/// <0|rho_S|0> / Tr(rho_S).
double pn0(const ComplexMatrix& rho_s);

/// Closed-form renormalized population for the two-level model with
/// theta = pi/2, s = 1 and initial state |0>.
double analytic_pn0(double r, double t);

double delta_rho(const ComplexMatrix& a, const ComplexMatrix& b);

/// Uniform sample grid 0, dt, 2 dt, ... ending exactly at t_max.
std::vector<double> sample_grid(double t_max, double dt);

}  // namespace ptsim::evolution
