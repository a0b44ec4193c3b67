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

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "ptsim/evolution.hpp"
#include "ptsim/magnus.hpp"
#include "ptsim/numkit.hpp"

/// Row-stacking vectorization of density operators and the Lindbladian as a
/// matrix on the vectorized space.
namespace ptsim::vdms {

using magnus::MagnusOptions;
using numkit::ComplexMatrix;
using numkit::ComplexVector;
using numkit::Index;

/// Stacks the rows of `a` into one column: [[a1, a2], [a3, a4]] -> (a1, a2, a3, a4).
ComplexVector vec(const ComplexMatrix& a);
ComplexMatrix unvec(const ComplexVector& v, Index n);

/// Matrix of X -> A X B on row-stacked vectors: A (x) B^T.
ComplexMatrix sandwich_superoperator(const ComplexMatrix& a, const ComplexMatrix& b);

enum class ChannelKind { AD, PD, Dep };
enum class ChannelTarget { Main, Auxiliary };

const char* to_string(ChannelKind kind) noexcept;
const char* to_string(ChannelTarget target) noexcept;
ChannelKind parse_channel_kind(const std::string& s);
ChannelTarget parse_channel_target(const std::string& s);

struct NoiseChannel {
  ChannelKind kind = ChannelKind::AD;
  double gamma = 0.0;
  ChannelTarget target = ChannelTarget::Main;

  void validate() const;

  /// Jump operators on the 2n-dimensional auxiliary-major space. Main-system
  /// channels act as I_A (x) sigma and require a qubit main system.
  std::vector<ComplexMatrix> jump_operators(Index n_main) const;
};

/// -i (H (x) I - I (x) H^T)
ComplexMatrix hamiltonian_superoperator(const ComplexMatrix& h);

/// sum_mu Gamma (x) conj(Gamma) - 1/2 Gamma^dagger Gamma (x) I - 1/2 I (x) (Gamma^dagger Gamma)^T
ComplexMatrix dissipator_superoperator(std::span<const NoiseChannel> channels, Index n_main);

ComplexMatrix lindbladian_at(const ComplexMatrix& h_as, std::span<const NoiseChannel> channels);

/// Time-dependent Lindbladian built on top of a dilated-Hamiltonian source.
magnus::MatrixSource lindbladian(magnus::MatrixSource h_as, std::vector<NoiseChannel> channels);

/// Monitored bounds checked at every sample.
struct MasterTolerances {
  double trace = 1e-6;
  double hermiticity = 1e-8;
  double min_eigenvalue = -1e-7;
};

/// Propagates vec(rho) under the Lindbladian with the Magnus stepper.
/// Throws PositivityViolation when a sample leaves the monitored bounds.
evolution::Trajectory evolve_master(const magnus::MatrixSource& lindblad,
                                    const ComplexMatrix& rho_as0, std::span<const double> t_grid,
                                    const MagnusOptions& opts, const MasterTolerances& tols = {});

}  // namespace ptsim::vdms
