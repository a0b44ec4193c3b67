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

#include <vector>

#include "ptsim/numkit.hpp"

namespace ptsim::hamiltonian {

using numkit::Complex;
using numkit::ComplexMatrix;
using numkit::Index;

/// Matrix polynomial A(t) = sum_k C_k t^k. Evaluation is exact; a single
/// coefficient marks the generator as time-independent.
class Generator {
 public:
  explicit Generator(std::vector<ComplexMatrix> coefficients);

  static Generator constant(ComplexMatrix c0);

  ComplexMatrix operator()(double t) const;

  /// (A^dagger)(t) = A(t)^dagger, coefficient-wise.
  Generator adjoint() const;
  Generator scaled(Complex factor) const;

  Index dim() const { return coefficients_.front().rows(); }
  int degree() const { return static_cast<int>(coefficients_.size()) - 1; }
  bool is_time_independent() const { return coefficients_.size() == 1; }
  const std::vector<ComplexMatrix>& coefficients() const { return coefficients_; }

 private:
  std::vector<ComplexMatrix> coefficients_;
};

/// H_S = [[r e^{i theta}, s], [s, r e^{-i theta}]].
struct PTModel {
  double r = 0.0;
  double s = 1.0;
  double theta = 0.0;

  void validate() const;
};

enum class Phase { Unbroken, Broken, Exceptional };

const char* to_string(Phase phase) noexcept;

struct PhaseInfo {
  Phase phase;
  Complex e_plus;
  Complex e_minus;
  double discriminant;  // s^2 - r^2 sin^2 theta
};

Generator two_level(const PTModel& model);

/// Sign of s^2 - r^2 sin^2(theta); |discriminant| <= 1e-12 is Exceptional.
PhaseInfo classify_phase(const PTModel& model);

inline constexpr double kDefaultMetricScale = 5.0;

/// Metric eta = Xi Xi^dagger with Xi = (Phi^dagger)^{-1}, Phi the unit-column
/// right eigenvectors of an unbroken H, rescaled so min eig(eta) == scale.
ComplexMatrix metric_unbroken(const ComplexMatrix& h, double scale = kDefaultMetricScale);

}  // namespace ptsim::hamiltonian
