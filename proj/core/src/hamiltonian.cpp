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

#include "ptsim/hamiltonian.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include <Eigen/Eigenvalues>

namespace ptsim::hamiltonian {

Generator::Generator(std::vector<ComplexMatrix> coefficients)
    : coefficients_(std::move(coefficients)) {
  if (coefficients_.empty()) {
    throw Error(ErrorKind::InvalidArgument, "generator needs at least one coefficient");
  }
  const Index n = coefficients_.front().rows();
  if (n == 0) throw Error(ErrorKind::DimensionMismatch, "generator dimension is zero");
  for (const auto& c : coefficients_) {
    numkit::require_square_finite(c, "generator coefficient");
    if (c.rows() != n) {
      throw Error(ErrorKind::DimensionMismatch, "generator coefficients differ in dimension");
    }
  }
}

Generator Generator::constant(ComplexMatrix c0) {
  std::vector<ComplexMatrix> cs;
  cs.push_back(std::move(c0));
  return Generator(std::move(cs));
}

ComplexMatrix Generator::operator()(double t) const {
  // Horner
  ComplexMatrix acc = coefficients_.back();
  for (auto it = coefficients_.rbegin() + 1; it != coefficients_.rend(); ++it) {
    acc = acc * t + *it;
  }
  return acc;
}

Generator Generator::adjoint() const {
  std::vector<ComplexMatrix> cs;
  cs.reserve(coefficients_.size());
  for (const auto& c : coefficients_) cs.push_back(c.adjoint());
  return Generator(std::move(cs));
}

Generator Generator::scaled(Complex factor) const {
  std::vector<ComplexMatrix> cs;
  cs.reserve(coefficients_.size());
  for (const auto& c : coefficients_) cs.push_back(factor * c);
  return Generator(std::move(cs));
}

void PTModel::validate() const {
  if (!std::isfinite(r) || !std::isfinite(s) || !std::isfinite(theta)) {
    throw Error(ErrorKind::NonFinite, "PT model parameters must be finite");
  }
  constexpr double half_pi = 0.5 * std::numbers::pi;
  if (theta < -half_pi - 1e-15 || theta > half_pi + 1e-15) {
    throw Error(ErrorKind::InvalidArgument, "theta must lie in [-pi/2, pi/2]");
  }
}

const char* to_string(Phase phase) noexcept {
  switch (phase) {
    case Phase::Unbroken: return "unbroken";
    case Phase::Broken: return "broken";
    case Phase::Exceptional: return "exceptional";
  }
  return "unknown";
}

Generator two_level(const PTModel& model) {
  model.validate();
  ComplexMatrix h(2, 2);
  h << std::polar(model.r, model.theta), model.s, model.s, std::polar(model.r, -model.theta);
  return Generator::constant(std::move(h));
}

PhaseInfo classify_phase(const PTModel& model) {
  model.validate();
  const double sin_t = std::sin(model.theta);
  const double disc = model.s * model.s - model.r * model.r * sin_t * sin_t;
  const Complex root = std::sqrt(Complex(disc, 0.0));
  const double center = model.r * std::cos(model.theta);
  Phase phase = Phase::Exceptional;
  if (std::abs(disc) > 1e-12) phase = disc > 0.0 ? Phase::Unbroken : Phase::Broken;
  return {phase, center + root, center - root, disc};
}

ComplexMatrix metric_unbroken(const ComplexMatrix& h, double scale) {
  numkit::require_square_finite(h, "metric_unbroken input");
  if (!(scale > 0.0)) throw Error(ErrorKind::InvalidArgument, "metric scale must be positive");

  Eigen::ComplexEigenSolver<ComplexMatrix> solver(h);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorKind::NonFinite, "eigensolver failed on metric_unbroken input");
  }
  const auto& evals = solver.eigenvalues();
  const double hnorm = std::max(1.0, h.norm());
  for (Index i = 0; i < evals.size(); ++i) {
    if (std::abs(evals[i].imag()) > 1e-10 * hnorm) {
      std::ostringstream os;
      os << "eigenvalue " << evals[i] << " is not real";
      throw Error(ErrorKind::BrokenPhase, os.str());
    }
  }
  for (Index i = 0; i < evals.size(); ++i) {
    for (Index j = i + 1; j < evals.size(); ++j) {
      if (std::abs(evals[i] - evals[j]) < 1e-10) {
        throw Error(ErrorKind::DegenerateSpectrum,
                    "metric construction requires a non-degenerate spectrum");
      }
    }
  }

  ComplexMatrix phi = solver.eigenvectors();
  for (Index j = 0; j < phi.cols(); ++j) phi.col(j).normalize();
  const ComplexMatrix xi = phi.adjoint().inverse();
  ComplexMatrix eta = numkit::hermitian_part(xi * xi.adjoint());
  const double min_eig = numkit::herm_eig(eta).values.minCoeff();
  eta *= scale / min_eig;
  return eta;
}

}  // namespace ptsim::hamiltonian
