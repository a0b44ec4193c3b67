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

#include "ptsim/numkit.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <sstream>

#include <Eigen/Eigenvalues>

namespace ptsim {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::NotHermitian: return "NotHermitian";
    case ErrorKind::NotPSD: return "NotPSD";
    case ErrorKind::NonFinite: return "NonFinite";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::SingularSylvester: return "SingularSylvester";
    case ErrorKind::BrokenPhase: return "BrokenPhase";
    case ErrorKind::DegenerateSpectrum: return "DegenerateSpectrum";
    case ErrorKind::ConvergenceViolation: return "ConvergenceViolation";
    case ErrorKind::InvalidM0: return "InvalidM0";
    case ErrorKind::LegitimacyViolated: return "LegitimacyViolated";
    case ErrorKind::MetricMismatch: return "MetricMismatch";
    case ErrorKind::VanishingPostSelection: return "VanishingPostSelection";
    case ErrorKind::ZeroState: return "ZeroState";
    case ErrorKind::PositivityViolation: return "PositivityViolation";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

namespace {

std::string describe_step(double t0, double t1, double integral) {
  std::ostringstream os;
  os.precision(12);
  os << "Magnus step [" << t0 << ", " << t1 << "] has integral of ||A||_2 = " << integral
     << " >= pi";
  return os.str();
}

}  // namespace

ConvergenceError::ConvergenceError(double t0, double t1, double integral)
    : Error(ErrorKind::ConvergenceViolation, describe_step(t0, t1, integral)),
      t0_(t0),
      t1_(t1),
      integral_(integral) {}

}  // namespace ptsim

namespace ptsim::numkit {

namespace {

void check_hermitian(const ComplexMatrix& h, double tol, const char* what) {
  require_square_finite(h, what);
  const double defect = hermiticity_defect(h);
  if (defect > tol * h.norm()) {
    std::ostringstream os;
    os << what << " deviates from its adjoint by " << defect;
    throw Error(ErrorKind::NotHermitian, os.str());
  }
}

}  // namespace

EigenSystem herm_eig(const ComplexMatrix& h, double tol) {
  check_hermitian(h, tol, "herm_eig input");
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(hermitian_part(h));
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorKind::NonFinite, "Hermitian eigensolver failed to converge");
  }
  return {solver.eigenvalues(), solver.eigenvectors()};
}

ComplexMatrix expm(const ComplexMatrix& a) {
  require_square_finite(a, "expm input");
  const Index n = a.rows();
  if (n == 0) return a;

  // Higham (2005) degree-13 coefficients.
  static constexpr std::array<double, 14> b = {
      64764752532480000.0, 32382376266240000.0, 7771770303897600.0, 1187353796428800.0,
      129060195264000.0,   10559470521600.0,    670442572800.0,     33522128640.0,
      1323241920.0,        40840800.0,          960960.0,           16380.0,
      182.0,               1.0};
  constexpr double theta13 = 5.371920351148152;

  const double norm1 = a.cwiseAbs().colwise().sum().maxCoeff();
  int squarings = 0;
  if (norm1 > theta13) {
    squarings = static_cast<int>(std::ceil(std::log2(norm1 / theta13)));
  }
  const ComplexMatrix as = a / std::ldexp(1.0, squarings);
  const ComplexMatrix id = ComplexMatrix::Identity(n, n);
  const ComplexMatrix a2 = as * as;
  const ComplexMatrix a4 = a2 * a2;
  const ComplexMatrix a6 = a4 * a2;

  const ComplexMatrix u_inner = a6 * (b[13] * a6 + b[11] * a4 + b[9] * a2);
  const ComplexMatrix u =
      as * (u_inner + b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * id);
  const ComplexMatrix v = a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2) + b[6] * a6 + b[4] * a4 +
                          b[2] * a2 + b[0] * id;

  ComplexMatrix r = (v - u).partialPivLu().solve(v + u);
  for (int k = 0; k < squarings; ++k) r = r * r;
  return r;
}

ComplexMatrix psd_sqrt(const ComplexMatrix& p, double tol) {
  const EigenSystem eig = herm_eig(p, tol);
  RealVector roots(eig.values.size());
  for (Index i = 0; i < eig.values.size(); ++i) {
    const double lambda = eig.values[i];
    if (lambda < -tol) {
      std::ostringstream os;
      os << "eigenvalue " << lambda << " below -" << tol;
      throw Error(ErrorKind::NotPSD, os.str());
    }
    roots[i] = lambda < 0.0 ? 0.0 : std::sqrt(lambda);
  }
  const ComplexMatrix r = eig.vectors * roots.cast<Complex>().asDiagonal() * eig.vectors.adjoint();
  return hermitian_part(r);
}

ComplexMatrix sylvester_sqrt_derivative(const ComplexMatrix& xi, const ComplexMatrix& mprime,
                                        double tol) {
  require_square_finite(mprime, "sylvester right-hand side");
  if (mprime.rows() != xi.rows()) {
    throw Error(ErrorKind::DimensionMismatch, "xi and M' differ in dimension");
  }
  const EigenSystem eig = herm_eig(xi, tol);
  if (eig.values.size() > 0 && eig.values.minCoeff() <= tol) {
    std::ostringstream os;
    os << "xi has eigenvalue " << eig.values.minCoeff() << " <= " << tol;
    throw Error(ErrorKind::SingularSylvester, os.str());
  }
  const ComplexMatrix& u = eig.vectors;
  ComplexMatrix x = u.adjoint() * mprime * u;
  for (Index i = 0; i < x.rows(); ++i) {
    for (Index j = 0; j < x.cols(); ++j) {
      x(i, j) /= eig.values[i] + eig.values[j];
    }
  }
  return u * x * u.adjoint();
}

double frobenius_norm(const ComplexMatrix& a) { return a.norm(); }

double spectral_norm(const ComplexMatrix& a) {
  if (a.size() == 0) return 0.0;
  // sigma_max^2 is the top eigenvalue of A^dagger A; far cheaper than an SVD.
  const ComplexMatrix gram = a.adjoint() * a;
  const Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(gram, Eigen::EigenvaluesOnly);
  return std::sqrt(std::max(es.eigenvalues()(gram.rows() - 1), 0.0));
}

Norms norms(const ComplexMatrix& a) {
  require_square_finite(a, "norms input");
  return {frobenius_norm(a), spectral_norm(a)};
}

ComplexMatrix identity(Index n) { return ComplexMatrix::Identity(n, n); }

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b) {
  return a * b - b * a;
}

ComplexMatrix hermitian_part(const ComplexMatrix& a) {
  return 0.5 * (a + a.adjoint());
}

double hermiticity_defect(const ComplexMatrix& a) { return (a - a.adjoint()).norm(); }

double anti_hermiticity_defect(const ComplexMatrix& a) { return (a + a.adjoint()).norm(); }

bool all_finite(const ComplexMatrix& a) {
  return a.real().allFinite() && a.imag().allFinite();
}

void require_square_finite(const ComplexMatrix& a, const char* what) {
  if (a.rows() != a.cols()) {
    std::ostringstream os;
    os << what << " is " << a.rows() << "x" << a.cols() << ", expected square";
    throw Error(ErrorKind::DimensionMismatch, os.str());
  }
  if (!all_finite(a)) {
    throw Error(ErrorKind::NonFinite, std::string(what) + " has NaN or Inf entries");
  }
}

ComplexMatrix pauli_x() {
  ComplexMatrix m(2, 2);
  m << 0.0, 1.0, 1.0, 0.0;
  return m;
}

ComplexMatrix pauli_y() {
  ComplexMatrix m(2, 2);
  m << 0.0, -kI, kI, 0.0;
  return m;
}

ComplexMatrix pauli_z() {
  ComplexMatrix m(2, 2);
  m << 1.0, 0.0, 0.0, -1.0;
  return m;
}

Quadrature gauss_legendre(int n, double a, double b) {
  if (n < 1) throw Error(ErrorKind::InvalidArgument, "quadrature needs at least one node");
  Quadrature q;
  q.nodes.resize(static_cast<std::size_t>(n));
  q.weights.resize(static_cast<std::size_t>(n));
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (b + a);
  // Newton iteration on P_n from the Chebyshev-like initial guess; nodes are
  // symmetric so only half of them are computed.
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0;
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // Recompute the derivative at the converged node for the weight.
    {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    const auto lo = static_cast<std::size_t>(i);
    const auto hi = static_cast<std::size_t>(n - 1 - i);
    q.nodes[lo] = mid - half * x;
    q.nodes[hi] = mid + half * x;
    q.weights[lo] = half * w;
    q.weights[hi] = half * w;
  }
  return q;
}

}  // namespace ptsim::numkit
