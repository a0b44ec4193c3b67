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

#include "ptsim/magnus.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace ptsim::magnus {

using numkit::commutator;

MatrixSource::MatrixSource(const hamiltonian::Generator& g)
    : dim(g.dim()), eval([g](double t) { return g(t); }), time_independent(g.is_time_independent()) {}

void MagnusOptions::validate() const {
  if (order < 1 || order > 4) {
    throw Error(ErrorKind::InvalidArgument, "Magnus order must be in [1, 4]");
  }
  if (!(h > 0.0) || !std::isfinite(h)) {
    throw Error(ErrorKind::InvalidArgument, "Magnus step h must be positive");
  }
  if (quad_nodes < 2) {
    throw Error(ErrorKind::InvalidArgument, "quad_nodes must be at least 2");
  }
}

namespace {

void require_interval(double t0, double t1) {
  if (!(t1 > t0)) {
    std::ostringstream os;
    os << "interval [" << t0 << ", " << t1 << "] is empty";
    throw Error(ErrorKind::InvalidArgument, os.str());
  }
}

// Reference rule on [0, 1]; nested integrals rescale it onto [t0, t_outer].
struct UnitRule {
  std::vector<double> x;
  std::vector<double> w;

  explicit UnitRule(int n) {
    const numkit::Quadrature q = numkit::gauss_legendre(n, 0.0, 1.0);
    x = q.nodes;
    w = q.weights;
  }
  std::size_t size() const { return x.size(); }
};

ComplexMatrix eval_checked(const MatrixSource& a, double t) {
  ComplexMatrix m = a(t);
  if (m.rows() != a.dim || m.cols() != a.dim) {
    throw Error(ErrorKind::DimensionMismatch, "matrix source returned a wrong-sized matrix");
  }
  return m;
}

}  // namespace

std::array<ComplexMatrix, 4> omega_components(const MatrixSource& a, double t0, double t1,
                                              const MagnusOptions& opts) {
  opts.validate();
  require_interval(t0, t1);
  const Index n = a.dim;
  std::array<ComplexMatrix, 4> omega;
  for (auto& o : omega) o = ComplexMatrix::Zero(n, n);

  const double len = t1 - t0;
  if (a.time_independent) {
    omega[0] = eval_checked(a, t0) * len;
    return omega;
  }

  const UnitRule rule(opts.quad_nodes);
  const std::size_t q = rule.size();

  // Level 1: nodes s_i = t0 + len * x_i.
  std::vector<double> s1(q);
  std::vector<ComplexMatrix> a1(q);
  for (std::size_t i = 0; i < q; ++i) {
    s1[i] = t0 + len * rule.x[i];
    a1[i] = eval_checked(a, s1[i]);
    omega[0] += (len * rule.w[i]) * a1[i];
  }
  if (opts.order < 2) return omega;

  // Nested simplex t0 < t_k < ... < t_2 < t_1, each inner integral mapped
  // onto [t0, t_outer].
  for (std::size_t i = 0; i < q; ++i) {
    const double w1 = len * rule.w[i];
    const double span1 = s1[i] - t0;
    for (std::size_t j = 0; j < q; ++j) {
      const double t2 = t0 + span1 * rule.x[j];
      const double w2 = w1 * span1 * rule.w[j];
      const ComplexMatrix a2 = eval_checked(a, t2);
      const ComplexMatrix c12 = commutator(a1[i], a2);
      omega[1] += (0.5 * w2) * c12;
      if (opts.order < 3) continue;

      const double span2 = t2 - t0;
      for (std::size_t k = 0; k < q; ++k) {
        const double t3 = t0 + span2 * rule.x[k];
        const double w3 = w2 * span2 * rule.w[k];
        const ComplexMatrix a3 = eval_checked(a, t3);
        const ComplexMatrix c23 = commutator(a2, a3);
        // [A1,[A2,A3]] + [A3,[A2,A1]]
        omega[2] += (w3 / 6.0) * (commutator(a1[i], c23) + commutator(a3, -c12));
        if (opts.order < 4) continue;

        const double span3 = t3 - t0;
        for (std::size_t l = 0; l < q; ++l) {
          const double t4 = t0 + span3 * rule.x[l];
          const double w4 = w3 * span3 * rule.w[l];
          const ComplexMatrix a4 = eval_checked(a, t4);
          const ComplexMatrix c34 = commutator(a3, a4);
          const ComplexMatrix term = commutator(commutator(c12, a3), a4) +
                                     commutator(a1[i], commutator(c23, a4)) +
                                     commutator(a1[i], commutator(a2, c34)) +
                                     commutator(a2, commutator(a3, commutator(a4, a1[i])));
          omega[3] += (w4 / 12.0) * term;
        }
      }
    }
  }
  return omega;
}

ComplexMatrix omega_terms(const MatrixSource& a, double t0, double t1, const MagnusOptions& opts) {
  const auto parts = omega_components(a, t0, t1, opts);
  ComplexMatrix sum = parts[0];
  for (int k = 1; k < opts.order; ++k) sum += parts[static_cast<std::size_t>(k)];
  return sum;
}

ConvergenceCheck convergence_ok(const MatrixSource& a, double t0, double t1, int quad_nodes) {
  require_interval(t0, t1);
  if (quad_nodes < 2) throw Error(ErrorKind::InvalidArgument, "quad_nodes must be at least 2");
  double integral = 0.0;
  if (a.time_independent) {
    integral = numkit::spectral_norm(eval_checked(a, t0)) * (t1 - t0);
  } else {
    const numkit::Quadrature q = numkit::gauss_legendre(quad_nodes, t0, t1);
    for (std::size_t i = 0; i < q.nodes.size(); ++i) {
      integral += q.weights[i] * numkit::spectral_norm(eval_checked(a, q.nodes[i]));
    }
  }
  return {integral < std::numbers::pi, integral};
}

ComplexMatrix step_propagator(const MatrixSource& a, double t0, double t1,
                              const MagnusOptions& opts) {
  opts.validate();
  if (opts.enforce_convergence) {
    const ConvergenceCheck check = convergence_ok(a, t0, t1, opts.quad_nodes);
    if (!check.ok) throw ConvergenceError(t0, t1, check.integral);
  }
  return numkit::expm(omega_terms(a, t0, t1, opts));
}

std::vector<double> step_grid(double t0, double t1, double h) {
  require_interval(t0, t1);
  if (!(h > 0.0)) throw Error(ErrorKind::InvalidArgument, "step must be positive");
  // Steps that would leave a sliver below 1e-9 h are absorbed.
  const double ratio = (t1 - t0) / h;
  auto full = static_cast<long long>(std::floor(ratio + 1e-9));
  std::vector<double> grid;
  grid.reserve(static_cast<std::size_t>(full) + 2);
  for (long long k = 0; k <= full; ++k) grid.push_back(t0 + static_cast<double>(k) * h);
  if (t1 - grid.back() > 1e-9 * h) {
    grid.push_back(t1);
  } else {
    grid.back() = t1;
  }
  if (grid.size() < 2) grid = {t0, t1};
  return grid;
}

std::vector<PropagatorSample> propagate(const MatrixSource& a, double t0, double t1,
                                        const MagnusOptions& opts) {
  opts.validate();
  const std::vector<double> grid = step_grid(t0, t1, opts.h);
  std::vector<PropagatorSample> out;
  out.reserve(grid.size());
  ComplexMatrix u = numkit::identity(a.dim);
  out.push_back({grid.front(), u});
  for (std::size_t k = 1; k < grid.size(); ++k) {
    u = step_propagator(a, grid[k - 1], grid[k], opts) * u;
    out.push_back({grid[k], u});
  }
  return out;
}

std::vector<ComplexMatrix> propagate_to(const MatrixSource& a, std::span<const double> samples,
                                        const MagnusOptions& opts) {
  opts.validate();
  std::vector<ComplexMatrix> out;
  if (samples.empty()) return out;
  out.reserve(samples.size());
  const double t0 = samples.front();
  const double sliver = 1e-9 * opts.h;
  // Full steps stay on the grid t0 + k h; a sample between grid points gets a
  // partial step from the last anchor that is not carried forward.
  long k = 0;
  ComplexMatrix anchor = numkit::identity(a.dim);
  for (const double t : samples) {
    if (!out.empty() && t < samples[out.size() - 1]) {
      throw Error(ErrorKind::InvalidArgument, "sample times must be ascending");
    }
    while (t0 + static_cast<double>(k + 1) * opts.h <= t + sliver) {
      const double ta = t0 + static_cast<double>(k) * opts.h;
      anchor = step_propagator(a, ta, ta + opts.h, opts) * anchor;
      ++k;
    }
    const double ta = t0 + static_cast<double>(k) * opts.h;
    if (t - ta > sliver) {
      out.push_back(step_propagator(a, ta, t, opts) * anchor);
    } else {
      out.push_back(anchor);
    }
  }
  return out;
}

}  // namespace ptsim::magnus
