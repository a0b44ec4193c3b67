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

#include "ptsim/evolution.hpp"

#include <cmath>
#include <complex>
#include <memory>
#include <sstream>

namespace ptsim::evolution {

using numkit::Complex;
using numkit::kI;

namespace {

void require_grid(std::span<const double> t_grid) {
  if (t_grid.empty()) throw Error(ErrorKind::InvalidArgument, "time grid is empty");
  if (t_grid.front() != 0.0) throw Error(ErrorKind::InvalidArgument, "time grid must start at 0");
  for (std::size_t i = 1; i < t_grid.size(); ++i) {
    if (!(t_grid[i] > t_grid[i - 1])) {
      throw Error(ErrorKind::InvalidArgument, "time grid must be strictly ascending");
    }
  }
}

void require_density(const ComplexMatrix& rho, Index n, const char* what) {
  numkit::require_square_finite(rho, what);
  if (rho.rows() != n) throw Error(ErrorKind::DimensionMismatch, std::string(what) + " dimension");
  if (numkit::hermiticity_defect(rho) > 1e-9 * std::max(1.0, rho.norm())) {
    throw Error(ErrorKind::NotHermitian, std::string(what) + " is not Hermitian");
  }
}

}  // namespace

Embedding embed(const ComplexMatrix& rho_s, const ComplexMatrix& xi) {
  numkit::require_square_finite(rho_s, "rho_S");
  numkit::require_square_finite(xi, "xi");
  const Index n = rho_s.rows();
  if (xi.rows() != n) throw Error(ErrorKind::DimensionMismatch, "rho_S and xi differ in size");
  const ComplexMatrix id = numkit::identity(n);

  ComplexMatrix lift(2 * n, n);  // |0> (x) I + |1> (x) xi
  lift.topRows(n) = id;
  lift.bottomRows(n) = xi;
  ComplexMatrix lift_perp(2 * n, n);  // -|0> (x) xi^dagger + |1> (x) I
  lift_perp.topRows(n) = -xi.adjoint();
  lift_perp.bottomRows(n) = id;

  return {lift * rho_s * lift.adjoint(), lift_perp * rho_s * lift_perp.adjoint()};
}

ComplexMatrix normalize_initial(const ComplexMatrix& rho_raw, const ComplexMatrix& m0) {
  require_density(rho_raw, rho_raw.rows(), "initial state");
  if (m0.rows() != rho_raw.rows()) {
    throw Error(ErrorKind::DimensionMismatch, "initial state and M0 differ in size");
  }
  const double weight = (m0 * rho_raw).trace().real();
  if (!(weight > 0.0)) throw Error(ErrorKind::ZeroState, "Tr(M0 rho) must be positive");
  return rho_raw / weight;
}

Trajectory evolve_combination(const Generator& hs, const ComplexMatrix& m0,
                              const ComplexMatrix& rho_s0, std::span<const double> t_grid,
                              const MagnusOptions& opts) {
  require_grid(t_grid);
  require_density(rho_s0, hs.dim(), "rho_S(0)");
  const auto u = magnus::propagate_to(magnus::MatrixSource(hs.scaled(-kI)), t_grid, opts);
  dilation::MetricFlow flow(hs, m0, opts);

  Trajectory out;
  out.t.assign(t_grid.begin(), t_grid.end());
  out.rho.reserve(t_grid.size());
  for (std::size_t k = 0; k < t_grid.size(); ++k) {
    const ComplexMatrix rho_s = u[k] * rho_s0 * u[k].adjoint();
    const dilation::DilationFrame frame = flow.frame(t_grid[k]);
    out.rho.push_back(embed(rho_s, frame.xi).rho_as);
  }
  return out;
}

std::vector<ComplexMatrix> dilated_propagators(const Generator& hs, const ComplexMatrix& m0,
                                               std::span<const double> t_grid,
                                               const MagnusOptions& opts) {
  require_grid(t_grid);
  auto flow = std::make_shared<dilation::MetricFlow>(hs, m0, opts);
  const magnus::MatrixSource source(
      2 * hs.dim(), [flow](double t) -> ComplexMatrix { return -kI * flow->frame(t).h_as; });
  return magnus::propagate_to(source, t_grid, opts);
}

Trajectory evolve_dilation(const Generator& hs, const ComplexMatrix& m0,
                           const ComplexMatrix& rho_s0, std::span<const double> t_grid,
                           const MagnusOptions& opts) {
  require_grid(t_grid);
  require_density(rho_s0, hs.dim(), "rho_S(0)");
  dilation::MetricFlow flow(hs, m0, opts);
  const ComplexMatrix rho0 = embed(rho_s0, flow.frame(0.0).xi).rho_as;
  const auto u = dilated_propagators(hs, m0, t_grid, opts);

  Trajectory out;
  out.t.assign(t_grid.begin(), t_grid.end());
  out.rho.reserve(t_grid.size());
  for (const auto& uk : u) out.rho.push_back(uk * rho0 * uk.adjoint());
  return out;
}

MeasurementRecord project_measure(const ComplexMatrix& rho_as, double t) {
  numkit::require_square_finite(rho_as, "rho_AS");
  if (rho_as.rows() % 2 != 0) {
    throw Error(ErrorKind::DimensionMismatch, "rho_AS must have even dimension");
  }
  const Index n = rho_as.rows() / 2;
  MeasurementRecord rec;
  rec.t = t;
  rec.rho_s = rho_as.topLeftCorner(n, n);
  rec.p0 = rec.rho_s.trace().real();
  if (rec.p0 < 1e-12) {
    std::ostringstream os;
    os << "post-selection probability " << rec.p0 << " at t = " << t;
    throw Error(ErrorKind::VanishingPostSelection, os.str());
  }
  rec.rho_s_n = rec.rho_s / rec.p0;
  rec.pn0 = rec.rho_s(0, 0).real() / rec.p0;
  return rec;
}

double pn0(const ComplexMatrix& rho_s) {
  const double tr = rho_s.trace().real();
  if (std::abs(tr) < 1e-300 || !std::isfinite(tr)) {
    throw Error(ErrorKind::ZeroState, "rho_S has vanishing trace");
  }
  return rho_s(0, 0).real() / tr;
}

double analytic_pn0(double r, double t) {
  if (std::abs(r - 1.0) < 1e-12) {
    const double a = (t + 1.0) * (t + 1.0);
    return a / (a + t * t);
  }
  const Complex root = std::sqrt(Complex(r * r - 1.0, 0.0));
  const Complex grow = std::exp(t * root);
  const Complex decay = std::exp(-t * root);
  const double top = std::norm(grow * (r + root) - decay * (r - root));
  const double other = std::norm(kI * decay - kI * grow);
  return top / (top + other);
}

double delta_rho(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw Error(ErrorKind::DimensionMismatch, "delta_rho operands differ in shape");
  }
  return (a - b).norm();
}

std::vector<double> sample_grid(double t_max, double dt) {
  if (!(t_max > 0.0) || !(dt > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "t_max and sample_dt must be positive");
  }
  return magnus::step_grid(0.0, t_max, dt);
}

}  // namespace ptsim::evolution
