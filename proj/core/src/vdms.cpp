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

#include "ptsim/vdms.hpp"

#include <cmath>
#include <sstream>

namespace ptsim::vdms {

using numkit::identity;
using numkit::kI;
using numkit::kron;

ComplexVector vec(const ComplexMatrix& a) {
  ComplexVector v(a.size());
  Index p = 0;
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) v[p++] = a(i, j);
  }
  return v;
}

ComplexMatrix unvec(const ComplexVector& v, Index n) {
  if (n <= 0 || v.size() != n * n) {
    std::ostringstream os;
    os << "vector of length " << v.size() << " cannot be reshaped to " << n << "x" << n;
    throw Error(ErrorKind::DimensionMismatch, os.str());
  }
  ComplexMatrix a(n, n);
  Index p = 0;
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) a(i, j) = v[p++];
  }
  return a;
}

ComplexMatrix sandwich_superoperator(const ComplexMatrix& a, const ComplexMatrix& b) {
  return kron(a, b.transpose());
}

const char* to_string(ChannelKind kind) noexcept {
  switch (kind) {
    case ChannelKind::AD: return "AD";
    case ChannelKind::PD: return "PD";
    case ChannelKind::Dep: return "Dep";
  }
  return "?";
}

const char* to_string(ChannelTarget target) noexcept {
  return target == ChannelTarget::Main ? "main" : "auxiliary";
}

ChannelKind parse_channel_kind(const std::string& s) {
  if (s == "AD") return ChannelKind::AD;
  if (s == "PD") return ChannelKind::PD;
  if (s == "Dep") return ChannelKind::Dep;
  throw Error(ErrorKind::InvalidArgument, "unknown channel kind '" + s + "'");
}

ChannelTarget parse_channel_target(const std::string& s) {
  if (s == "main") return ChannelTarget::Main;
  if (s == "auxiliary") return ChannelTarget::Auxiliary;
  throw Error(ErrorKind::InvalidArgument, "unknown channel target '" + s + "'");
}

void NoiseChannel::validate() const {
  if (!(gamma >= 0.0) || !std::isfinite(gamma)) {
    throw Error(ErrorKind::InvalidArgument, "channel decay rate must be finite and >= 0");
  }
}

std::vector<ComplexMatrix> NoiseChannel::jump_operators(Index n_main) const {
  validate();
  if (target == ChannelTarget::Main && n_main != 2) {
    throw Error(ErrorKind::DimensionMismatch, "main-system channels require a qubit main system");
  }
  ComplexMatrix lowering = ComplexMatrix::Zero(2, 2);  // |0><1|
  lowering(0, 1) = 1.0;

  std::vector<ComplexMatrix> local;
  switch (kind) {
    case ChannelKind::AD: local = {lowering}; break;
    case ChannelKind::PD: local = {numkit::pauli_z()}; break;
    case ChannelKind::Dep: local = {numkit::pauli_x(), numkit::pauli_y(), numkit::pauli_z()}; break;
  }
  const double amp = std::sqrt(gamma);
  std::vector<ComplexMatrix> out;
  out.reserve(local.size());
  for (const auto& op : local) {
    out.push_back(amp * (target == ChannelTarget::Main ? kron(identity(2), op)
                                                       : kron(op, identity(n_main))));
  }
  return out;
}

ComplexMatrix hamiltonian_superoperator(const ComplexMatrix& h) {
  const ComplexMatrix id = identity(h.rows());
  return -kI * (kron(h, id) - kron(id, h.transpose()));
}

ComplexMatrix dissipator_superoperator(std::span<const NoiseChannel> channels, Index n_main) {
  const Index d = 2 * n_main;
  const ComplexMatrix id = identity(d);
  ComplexMatrix out = ComplexMatrix::Zero(d * d, d * d);
  for (const auto& ch : channels) {
    for (const auto& g : ch.jump_operators(n_main)) {
      const ComplexMatrix gg = g.adjoint() * g;
      out += sandwich_superoperator(g, g.adjoint()) - 0.5 * kron(gg, id) -
             0.5 * kron(id, gg.transpose());
    }
  }
  return out;
}

ComplexMatrix lindbladian_at(const ComplexMatrix& h_as, std::span<const NoiseChannel> channels) {
  numkit::require_square_finite(h_as, "H_AS");
  if (h_as.rows() % 2 != 0) throw Error(ErrorKind::DimensionMismatch, "H_AS must be 2n x 2n");
  return hamiltonian_superoperator(h_as) + dissipator_superoperator(channels, h_as.rows() / 2);
}

magnus::MatrixSource lindbladian(magnus::MatrixSource h_as, std::vector<NoiseChannel> channels) {
  if (h_as.dim % 2 != 0) throw Error(ErrorKind::DimensionMismatch, "H_AS must be 2n x 2n");
  const Index d = h_as.dim;
  const ComplexMatrix dissipator = dissipator_superoperator(channels, d / 2);
  const bool constant = h_as.time_independent;
  return magnus::MatrixSource(
      d * d,
      [h = std::move(h_as), dissipator](double t) -> ComplexMatrix {
        return hamiltonian_superoperator(h(t)) + dissipator;
      },
      constant);
}

evolution::Trajectory evolve_master(const magnus::MatrixSource& lindblad,
                                    const ComplexMatrix& rho_as0, std::span<const double> t_grid,
                                    const MagnusOptions& opts, const MasterTolerances& tols) {
  numkit::require_square_finite(rho_as0, "rho_AS(0)");
  const Index d = rho_as0.rows();
  if (lindblad.dim != d * d) {
    throw Error(ErrorKind::DimensionMismatch, "Lindbladian does not act on rho_AS(0)");
  }
  if (t_grid.empty() || t_grid.front() != 0.0) {
    throw Error(ErrorKind::InvalidArgument, "time grid must start at 0");
  }
  const ComplexVector v0 = vec(rho_as0);
  const auto props = magnus::propagate_to(lindblad, t_grid, opts);
  const double trace0 = rho_as0.trace().real();

  evolution::Trajectory out;
  out.t.assign(t_grid.begin(), t_grid.end());
  out.rho.reserve(t_grid.size());
  for (std::size_t k = 0; k < props.size(); ++k) {
    ComplexMatrix rho = unvec(props[k] * v0, d);
    const double tr_err = std::abs(rho.trace().real() - trace0);
    const double herm = numkit::hermiticity_defect(rho);
    rho = numkit::hermitian_part(rho);
    const double min_eig = numkit::herm_eig(rho, 1.0).values.minCoeff();
    if (tr_err > tols.trace || herm > tols.hermiticity || min_eig < tols.min_eigenvalue) {
      std::ostringstream os;
      os.precision(6);
      os << "at t = " << t_grid[k] << ": trace error " << tr_err << ", Hermiticity defect "
         << herm << ", min eigenvalue " << min_eig;
      throw Error(ErrorKind::PositivityViolation, os.str());
    }
    out.rho.push_back(std::move(rho));
  }
  return out;
}

}  // namespace ptsim::vdms
