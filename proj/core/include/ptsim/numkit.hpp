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

#include <complex>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "ptsim/errors.hpp"

/// Dense complex linear-algebra kernels shared by every other module.
namespace ptsim::numkit {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

inline constexpr double kDefaultTol = 1e-10;
inline constexpr Complex kI{0.0, 1.0};

struct EigenSystem {
  RealVector values;     // ascending
  ComplexMatrix vectors; // orthonormal columns
};

struct Norms {
  double frobenius;
  double spectral;
};

/// Eigendecomposition of a Hermitian matrix. Throws NotHermitian when
/// ||H - H^dagger||_F > tol * ||H||_F.
EigenSystem herm_eig(const ComplexMatrix& h, double tol = kDefaultTol);

/// Matrix exponential by scaling and squaring with a [13/13] Pade kernel.
ComplexMatrix expm(const ComplexMatrix& a);

/// Principal square root of a Hermitian positive-semidefinite matrix.
/// Eigenvalues in [-tol, 0) are clamped to zero; anything below -tol is NotPSD.
ComplexMatrix psd_sqrt(const ComplexMatrix& p, double tol = kDefaultTol);

/// Solves xi * X + X * xi = mprime for X in the eigenbasis of xi.
/// This is the derivative of sqrt(M - I) given M'.
ComplexMatrix sylvester_sqrt_derivative(const ComplexMatrix& xi, const ComplexMatrix& mprime,
                                        double tol = kDefaultTol);

Norms norms(const ComplexMatrix& a);
double frobenius_norm(const ComplexMatrix& a);
double spectral_norm(const ComplexMatrix& a);

// Small helpers used throughout the library.

ComplexMatrix identity(Index n);
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix hermitian_part(const ComplexMatrix& a);

/// ||A - A^dagger||_F
double hermiticity_defect(const ComplexMatrix& a);
/// ||A + A^dagger||_F
double anti_hermiticity_defect(const ComplexMatrix& a);

bool all_finite(const ComplexMatrix& a);

/// Throws NonFinite / DimensionMismatch for matrices that violate the
/// square, finite-entry contract. `what` names the argument in the message.
void require_square_finite(const ComplexMatrix& a, const char* what);

ComplexMatrix pauli_x();
ComplexMatrix pauli_y();
ComplexMatrix pauli_z();

/// Gauss-Legendre nodes and weights mapped onto [a, b].
struct Quadrature {
  std::vector<double> nodes;
  std::vector<double> weights;
};
Quadrature gauss_legendre(int n, double a, double b);

}  // namespace ptsim::numkit
