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

#include "ptsim/dilation.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace ptsim::dilation {

using numkit::hermitian_part;
using numkit::kI;

ComplexMatrix metric_derivative(const ComplexMatrix& h, const ComplexMatrix& m) {
  return -kI * (h.adjoint() * m - m * h);
}

void validate_initial_metric(const ComplexMatrix& m0, Index dim) {
  numkit::require_square_finite(m0, "M0");
  if (m0.rows() != dim) {
    throw Error(ErrorKind::DimensionMismatch, "M0 dimension differs from H_S");
  }
  if (numkit::hermiticity_defect(m0) > 1e-9 * m0.norm()) {
    throw Error(ErrorKind::InvalidM0, "M0 is not Hermitian");
  }
  const double min_eig = numkit::herm_eig(hermitian_part(m0), 1e-9).values.minCoeff();
  if (!(min_eig > 1.0)) {
    std::ostringstream os;
    os << "M0 has minimum eigenvalue " << min_eig << " <= 1";
    throw Error(ErrorKind::InvalidM0, os.str());
  }
}

MetricFlow::MetricFlow(Generator hs, ComplexMatrix m0, MagnusOptions opts)
    : hs_(std::move(hs)), opts_(opts) {
  opts_.validate();
  validate_initial_metric(m0, hs_.dim());
  adjoint_flow_ = magnus::MatrixSource(hs_.adjoint().scaled(-kI));
  anchors_.push_back(hermitian_part(m0));
}

ComplexMatrix MetricFlow::metric(double t) {
  if (t < 0.0) throw Error(ErrorKind::InvalidArgument, "metric requested before t = 0");
  const double h = opts_.h;
  const auto k = static_cast<std::size_t>(std::floor(t / h + 1e-9));
  while (anchors_.size() <= k) {
    const std::size_t j = anchors_.size() - 1;
    const double a = static_cast<double>(j) * h;
    const ComplexMatrix g = magnus::step_propagator(adjoint_flow_, a, a + h, opts_);
    anchors_.push_back(hermitian_part(g * anchors_[j] * g.adjoint()));
  }
  const double anchor_t = static_cast<double>(k) * h;
  if (t - anchor_t <= 1e-12 * h) return anchors_[k];
  const ComplexMatrix g = magnus::step_propagator(adjoint_flow_, anchor_t, t, opts_);
  return hermitian_part(g * anchors_[k] * g.adjoint());
}

MetricSample MetricFlow::sample(double t) {
  ComplexMatrix m = metric(t);
  ComplexMatrix mp = hermitian_part(metric_derivative(hs_(t), m));
  return {t, std::move(m), std::move(mp)};
}

DilationFrame MetricFlow::frame(double t) {
  const MetricSample s = sample(t);
  return frame_from(hs_(t), t, s.m, s.mprime);
}

std::vector<MetricSample> m_trajectory(const Generator& hs, const ComplexMatrix& m0,
                                       std::span<const double> t_grid, const MagnusOptions& opts) {
  if (t_grid.empty()) return {};
  if (t_grid.front() != 0.0) throw Error(ErrorKind::InvalidArgument, "t_grid must start at 0");
  if (!std::is_sorted(t_grid.begin(), t_grid.end())) {
    throw Error(ErrorKind::InvalidArgument, "t_grid must be ascending");
  }
  MetricFlow flow(hs, m0, opts);
  std::vector<MetricSample> out;
  out.reserve(t_grid.size());
  for (double t : t_grid) out.push_back(flow.sample(t));
  return out;
}

DilationFrame frame_from(const ComplexMatrix& hs_t, double t, const ComplexMatrix& m,
                         const ComplexMatrix& mprime) {
  numkit::require_square_finite(m, "M");
  numkit::require_square_finite(mprime, "M'");
  const Index n = m.rows();
  if (hs_t.rows() != n || mprime.rows() != n) {
    throw Error(ErrorKind::DimensionMismatch, "H_S, M and M' must share a dimension");
  }
  const ComplexMatrix id = numkit::identity(n);
  const double min_eig = numkit::herm_eig(m, 1e-9).values.minCoeff();
  if (!(min_eig > 1.0 + kLegitimacyMargin)) {
    std::ostringstream os;
    os.precision(12);
    os << "min eig(M) = " << min_eig << " at t = " << t;
    throw Error(ErrorKind::LegitimacyViolated, os.str());
  }

  DilationFrame f;
  f.t = t;
  f.m = m;
  f.mprime = mprime;
  f.xi = numkit::psd_sqrt(m - id);
  f.xiprime = numkit::sylvester_sqrt_derivative(f.xi, mprime);
  const ComplexMatrix m_inv = hermitian_part(m.inverse());
  const ComplexMatrix& xi = f.xi;
  const ComplexMatrix& xp = f.xiprime;

  f.k = hs_t * m_inv + 0.5 * kI * m_inv * mprime * m_inv;
  f.h2 = f.k * xi - xi * f.k - 0.5 * kI * (xp * m_inv + m_inv * xp);
  f.h1 = f.k + xi * f.k * xi + 0.5 * kI * (xp * xi * m_inv - m_inv * xi * xp);
  // Second, independent route for H4 so that H1 = H4 is a real check.
  f.h4 = (kI * xp * xi + xi * hs_t * xi + hs_t) * m_inv;

  ComplexMatrix h_as(2 * n, 2 * n);
  h_as.topLeftCorner(n, n) = f.h1;
  h_as.topRightCorner(n, n) = f.h2;
  h_as.bottomLeftCorner(n, n) = f.h2.adjoint();
  h_as.bottomRightCorner(n, n) = f.h4;
  f.h_as = hermitian_part(h_as);
  return f;
}

DilationFrame frame_at(const Generator& hs, double t, const ComplexMatrix& m,
                       const ComplexMatrix& mprime) {
  return frame_from(hs(t), t, m, mprime);
}

std::optional<double> legitimacy_time(const Generator& hs, const ComplexMatrix& m0, double t_max,
                                      const MagnusOptions& opts, double tol) {
  if (!(t_max > 0.0)) throw Error(ErrorKind::InvalidArgument, "t_max must be positive");
  if (!(tol > 0.0)) throw Error(ErrorKind::InvalidArgument, "tolerance must be positive");
  MetricFlow flow(hs, m0, opts);
  auto excess = [&flow](double t) {
    return numkit::herm_eig(flow.metric(t), 1e-9).values.minCoeff() - 1.0;
  };

  const std::vector<double> grid = magnus::step_grid(0.0, t_max, opts.h);
  for (std::size_t k = 1; k < grid.size(); ++k) {
    if (excess(grid[k]) > 0.0) continue;
    double lo = grid[k - 1];
    double hi = grid[k];
    while (hi - lo > tol) {
      const double mid = 0.5 * (lo + hi);
      if (excess(mid) > 0.0) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    return 0.5 * (lo + hi);
  }
  return std::nullopt;
}

DilationFrame ti_unbroken_shortcut(const ComplexMatrix& h, const ComplexMatrix& eta, double tol) {
  numkit::require_square_finite(h, "H");
  numkit::require_square_finite(eta, "eta");
  const double residual = (eta * h - h.adjoint() * eta).norm();
  if (residual > tol * std::max(1.0, h.norm() * eta.norm())) {
    std::ostringstream os;
    os << "||eta H - H^dagger eta||_F = " << residual;
    throw Error(ErrorKind::MetricMismatch, os.str());
  }
  const Index n = h.rows();
  const ComplexMatrix m = hermitian_part(eta);
  const double min_eig = numkit::herm_eig(m, 1e-9).values.minCoeff();
  if (!(min_eig > 1.0 + kLegitimacyMargin)) {
    throw Error(ErrorKind::LegitimacyViolated, "metric must have min eigenvalue > 1");
  }

  DilationFrame f;
  f.m = m;
  f.mprime = ComplexMatrix::Zero(n, n);
  f.xi = numkit::psd_sqrt(m - numkit::identity(n));
  f.xiprime = ComplexMatrix::Zero(n, n);
  const ComplexMatrix k = h * hermitian_part(m.inverse());
  f.k = k;
  f.h1 = k + f.xi * k * f.xi;
  f.h4 = f.h1;
  f.h2 = k * f.xi - f.xi * k;

  ComplexMatrix h_as(2 * n, 2 * n);
  h_as.topLeftCorner(n, n) = f.h1;
  h_as.topRightCorner(n, n) = f.h2;
  h_as.bottomLeftCorner(n, n) = f.h2.adjoint();
  h_as.bottomRightCorner(n, n) = f.h4;
  f.h_as = hermitian_part(h_as);
  return f;
}

PseudoObservables pseudo_observables(const DilationFrame& frame) {
  const ComplexMatrix h_s = frame.k * frame.m;
  const ComplexMatrix root = numkit::psd_sqrt(frame.m);
  const ComplexMatrix root_inv = hermitian_part(root.inverse());
  return {h_s, root * h_s * root_inv};
}

double FrameResiduals::max_structural() const {
  return std::max({metric_hermitian, xi_square, k_hermitian, h2_anti_hermitian, h1_minus_h4,
                   h1_plus_ih2, h1_minus_ih2, h_as_hermitian});
}

double FrameResiduals::max_relation() const {
  return std::max({relation_main, relation_aux, relation_complement, relation_complement_aux});
}

FrameResiduals frame_residuals(const DilationFrame& f, const ComplexMatrix& hs_t) {
  using numkit::hermiticity_defect;
  const Index n = f.m.rows();
  const ComplexMatrix id = numkit::identity(n);
  FrameResiduals r{};
  r.metric_hermitian = hermiticity_defect(f.m);
  r.min_eig_m = numkit::herm_eig(hermitian_part(f.m), 1.0).values.minCoeff();
  r.xi_square = (f.xi * f.xi - (f.m - id)).norm();
  r.k_hermitian = hermiticity_defect(f.k);
  r.h2_anti_hermitian = numkit::anti_hermiticity_defect(f.h2);
  r.h1_minus_h4 = (f.h1 - f.h4).norm();
  r.h1_plus_ih2 = hermiticity_defect(f.h1 + kI * f.h2);
  r.h1_minus_ih2 = hermiticity_defect(f.h1 - kI * f.h2);
  // Assembled from the raw blocks, not the symmetrised f.h_as.
  ComplexMatrix raw(2 * n, 2 * n);
  raw.topLeftCorner(n, n) = f.h1;
  raw.topRightCorner(n, n) = f.h2;
  raw.bottomLeftCorner(n, n) = f.h2.adjoint();
  raw.bottomRightCorner(n, n) = f.h4;
  r.h_as_hermitian = hermiticity_defect(raw);
  r.relation_main = (f.h1 + f.h2 * f.xi - hs_t).norm();
  r.relation_aux = (f.h2.adjoint() + f.h4 * f.xi - kI * f.xiprime - f.xi * hs_t).norm();
  r.relation_complement = (-f.h1 * f.xi + f.h2 + kI * f.xiprime + f.xi * hs_t).norm();
  r.relation_complement_aux = (-f.h2.adjoint() * f.xi + f.h4 - hs_t).norm();
  return r;
}

numkit::RealVector dilated_spectrum_descending(const DilationFrame& frame) {
  const numkit::RealVector asc = numkit::herm_eig(frame.h_as, 1e-9).values;
  return asc.reverse();
}

}  // namespace ptsim::dilation
