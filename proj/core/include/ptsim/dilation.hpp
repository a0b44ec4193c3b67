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

#include <optional>
#include <span>
#include <vector>

#include "ptsim/hamiltonian.hpp"
#include "ptsim/magnus.hpp"
#include "ptsim/numkit.hpp"

/// Hermitian dilation of a non-Hermitian H_S(t) with one auxiliary qubit.
///
/// The 2n-dimensional space is ordered auxiliary-major:
/// {|0>_A (x) e_1 .. e_n, |1>_A (x) e_1 .. e_n}, so the dilated Hamiltonian is
/// the block matrix [[H1, H2], [H2^dagger, H4]].
namespace ptsim::dilation {

using hamiltonian::Generator;
using magnus::MagnusOptions;
using numkit::ComplexMatrix;
using numkit::Index;

/// min eig(M) must exceed 1 by this much for xi' to exist.
inline constexpr double kLegitimacyMargin = 1e-10;

struct DilationFrame {
  double t = 0.0;
  ComplexMatrix m;
  ComplexMatrix mprime;
  ComplexMatrix xi;
  ComplexMatrix xiprime;
  ComplexMatrix k;
  ComplexMatrix h1;
  ComplexMatrix h2;
  ComplexMatrix h4;
  ComplexMatrix h_as;  // 2n x 2n
};

struct MetricSample {
  double t;
  ComplexMatrix m;
  ComplexMatrix mprime;
};

/// M' = -i (H^dagger M - M H).
ComplexMatrix metric_derivative(const ComplexMatrix& h, const ComplexMatrix& m);

/// Throws InvalidM0 unless M0 is Hermitian with min eigenvalue > 1.
void validate_initial_metric(const ComplexMatrix& m0, Index dim);

/// M(t) = G(t) M0 G(t)^dagger, G the time-ordered propagator of -i H_S^dagger(t).
///
/// M is stored at the step anchors t = k h and reached in between by one
/// partial Magnus step from the preceding anchor, so values at quadrature
/// nodes agree with the anchors. Not safe for concurrent use; each thread
/// should own its flow.
class MetricFlow {
 public:
  MetricFlow(Generator hs, ComplexMatrix m0, MagnusOptions opts);

  ComplexMatrix metric(double t);
  MetricSample sample(double t);
  DilationFrame frame(double t);

  const Generator& hamiltonian() const { return hs_; }
  const MagnusOptions& options() const { return opts_; }

 private:
  Generator hs_;
  magnus::MatrixSource adjoint_flow_;
  MagnusOptions opts_;
  std::vector<ComplexMatrix> anchors_;
};

std::vector<MetricSample> m_trajectory(const Generator& hs, const ComplexMatrix& m0,
                                       std::span<const double> t_grid, const MagnusOptions& opts);

DilationFrame frame_at(const Generator& hs, double t, const ComplexMatrix& m,
                       const ComplexMatrix& mprime);

/// Builds a frame from H_S evaluated at a single instant.
DilationFrame frame_from(const ComplexMatrix& hs_t, double t, const ComplexMatrix& m,
                         const ComplexMatrix& mprime);

/// First t in (0, t_max] with min eig M(t) = 1, bracketed on the step grid and
/// refined by bisection to `tol`. Empty when M stays legitimate.
std::optional<double> legitimacy_time(const Generator& hs, const ComplexMatrix& m0, double t_max,
                                      const MagnusOptions& opts, double tol = 1e-4);

/// Time-independent unbroken case with M(t) = eta: K = H eta^{-1}, xi' = 0.
DilationFrame ti_unbroken_shortcut(const ComplexMatrix& h, const ComplexMatrix& eta,
                                   double tol = 1e-9);

struct PseudoObservables {
  ComplexMatrix h_s;     // K M
  ComplexMatrix h_phys;  // M^{1/2} h_S M^{-1/2}
};

PseudoObservables pseudo_observables(const DilationFrame& frame);

/// Residuals of every structural identity a frame should satisfy.
struct FrameResiduals {
  double metric_hermitian;   // ||M - M^dagger||_F
  double min_eig_m;          // min eig(M)
  double xi_square;          // ||xi^2 - (M - I)||_F
  double k_hermitian;        // ||K - K^dagger||_F
  double h2_anti_hermitian;  // ||H2 + H2^dagger||_F
  double h1_minus_h4;        // ||H1 - H4||_F
  double h1_plus_ih2;        // ||(H1 + iH2) - (H1 + iH2)^dagger||_F
  double h1_minus_ih2;       // ||(H1 - iH2) - (H1 - iH2)^dagger||_F
  double h_as_hermitian;     // ||H_AS - H_AS^dagger||_F
  double relation_main;            // ||H1 + H2 xi - H_S||_F
  // Block rows of i d/dt [I; xi] = H_AS [I; xi] H_S and of the complement
  // embedding [-xi; I].
  double relation_aux;             // ||H2^dagger + H4 xi - i xi' - xi H_S||_F
  double relation_complement;      // ||-H1 xi + H2 + i xi' + xi H_S||_F
  double relation_complement_aux;  // ||-H2^dagger xi + H4 - H_S||_F

  double max_structural() const;
  double max_relation() const;
};

FrameResiduals frame_residuals(const DilationFrame& frame, const ComplexMatrix& hs_t);

/// Eigenvalues of H_AS sorted in descending order.
numkit::RealVector dilated_spectrum_descending(const DilationFrame& frame);

}  // namespace ptsim::dilation
