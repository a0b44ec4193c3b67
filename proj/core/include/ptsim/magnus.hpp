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

#include <array>
#include <functional>
#include <span>
#include <vector>

#include "ptsim/hamiltonian.hpp"
#include "ptsim/numkit.hpp"

/// Truncated Magnus-series propagators for Y' = A(t) Y.
namespace ptsim::magnus {

using numkit::ComplexMatrix;
using numkit::Index;

/// A(t) queried pointwise. Polynomial generators convert implicitly; the
/// dilated Hamiltonian and Lindbladian have no closed form and are supplied
/// as callables.
struct MatrixSource {
  Index dim = 0;
  std::function<ComplexMatrix(double)> eval;
  bool time_independent = false;

  MatrixSource() = default;
  MatrixSource(Index d, std::function<ComplexMatrix(double)> f, bool constant = false)
      : dim(d), eval(std::move(f)), time_independent(constant) {}
  MatrixSource(const hamiltonian::Generator& g);  // NOLINT(google-explicit-constructor)

  ComplexMatrix operator()(double t) const { return eval(t); }
};

struct MagnusOptions {
  int order = 1;                    // highest Omega_k retained, 1..4
  double h = 0.02;                  // maximum step length
  int quad_nodes = 8;               // Gauss-Legendre nodes per integral dimension
  bool enforce_convergence = true;  // reject steps with int ||A||_2 >= pi

  void validate() const;
};

/// Omega_1 .. Omega_order over [t0, t1]; unused slots are zero matrices.
std::array<ComplexMatrix, 4> omega_components(const MatrixSource& a, double t0, double t1,
                                              const MagnusOptions& opts);

/// Sum of Omega_k(t1, t0) for k <= opts.order. Exactly A * (t1 - t0) for a
/// time-independent source.
ComplexMatrix omega_terms(const MatrixSource& a, double t0, double t1, const MagnusOptions& opts);

struct ConvergenceCheck {
  bool ok;
  double integral;
};

/// Quadrature estimate of int_{t0}^{t1} ||A(s)||_2 ds against the pi bound.
ConvergenceCheck convergence_ok(const MatrixSource& a, double t0, double t1, int quad_nodes);

/// exp(Omega(t1, t0)); throws ConvergenceError when enforcement is on and
/// the step violates the bound.
ComplexMatrix step_propagator(const MatrixSource& a, double t0, double t1,
                              const MagnusOptions& opts);

/// Step boundaries t0 = s_0 < s_1 < ... < s_m = t1 with s_k = t0 + k h and a
/// shorter final step for the remainder.
std::vector<double> step_grid(double t0, double t1, double h);

struct PropagatorSample {
  double t;
  ComplexMatrix u;
};

/// Cumulative propagators U_k = exp(Omega(s_k, s_{k-1})) U_{k-1}, U_0 = I, at
/// every point of step_grid(t0, t1, h).
std::vector<PropagatorSample> propagate(const MatrixSource& a, double t0, double t1,
                                        const MagnusOptions& opts);

/// Cumulative propagators at ascending sample times. Steps follow the grid
/// samples[0] + k h regardless of sampling density, so the result matches
/// propagate() at grid points; off-grid samples add one partial step from the
/// preceding grid point. samples[0] maps to I.
std::vector<ComplexMatrix> propagate_to(const MatrixSource& a, std::span<const double> samples,
                                        const MagnusOptions& opts);

}  // namespace ptsim::magnus
