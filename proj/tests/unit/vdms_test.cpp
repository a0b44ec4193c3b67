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

#include <doctest.h>

#include <cmath>
#include <memory>
#include <numbers>

#include "ptsim/dilation.hpp"
#include "ptsim/errors.hpp"
#include "ptsim/evolution.hpp"
#include "ptsim/vdms.hpp"
#include "support.hpp"

using namespace ptsim;
using namespace ptsim::testing;
using magnus::MagnusOptions;
using vdms::ChannelKind;
using vdms::ChannelTarget;
using vdms::NoiseChannel;

namespace {

const Complex kI(0.0, 1.0);

Eigen::VectorXcd row_stack(const Mat& a) {
  Eigen::VectorXcd v(a.size());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) v(i * a.cols() + j) = a(i, j);
  return v;
}

Mat lowering() {
  Mat m = Mat::Zero(2, 2);
  m(0, 1) = 1.0;
  return m;
}

// Test-side Lindblad right-hand side for channels on the main qubit.
Mat lindblad_rhs(const Mat& h, const std::vector<Mat>& jumps, const Mat& rho) {
  Mat out = -kI * (h * rho - rho * h);
  for (const auto& g : jumps) {
    const Mat gg = g.adjoint() * g;
    out += g * rho * g.adjoint() - 0.5 * (gg * rho + rho * gg);
  }
  return out;
}

std::vector<Mat> main_jumps(ChannelKind kind, double gamma) {
  const double a = std::sqrt(gamma);
  std::vector<Mat> local;
  switch (kind) {
    case ChannelKind::AD: local = {lowering()}; break;
    case ChannelKind::PD: local = {sigma_z()}; break;
    case ChannelKind::Dep: local = {sigma_x(), sigma_y(), sigma_z()}; break;
  }
  std::vector<Mat> out;
  for (const auto& l : local) out.push_back(a * kron(eye(2), l));
  return out;
}

}  // namespace

TEST_SUITE("vdms") {

TEST_CASE("vec stacks rows and unvec inverts it") {
  Mat a(2, 2);
  a << 1, 2, 3, 4;
  const Eigen::VectorXcd v = vdms::vec(a);
  REQUIRE(v.size() == 4);
  for (int i = 0; i < 4; ++i) CHECK(v(i) == Complex(i + 1.0));
  std::mt19937_64 rng(kSeed);
  const Mat b = random_matrix(rng, 5);
  CHECK(fro(vdms::unvec(vdms::vec(b), 5) - b) == 0.0);
  CHECK_THROWS_AS(vdms::unvec(Eigen::VectorXcd::Zero(5), 2), Error);
}

TEST_CASE("vec(AXB) = (A (x) B^T) vec(X) on random triples") {
  std::mt19937_64 rng(kSeed + 1);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + trial % 6;
    const Mat a = random_matrix(rng, n);
    const Mat x = random_matrix(rng, n);
    const Mat b = random_matrix(rng, n);
    const Eigen::VectorXcd lhs = row_stack(a * x * b);
    const Eigen::VectorXcd rhs = vdms::sandwich_superoperator(a, b) * row_stack(x);
    CHECK((lhs - rhs).norm() <= 1e-12 * std::max(1.0, lhs.norm()));
    CHECK(fro(vdms::sandwich_superoperator(a, b) - kron(a, b.transpose())) == 0.0);
  }
}

TEST_CASE("channel parsing and validation") {
  CHECK(vdms::parse_channel_kind("AD") == ChannelKind::AD);
  CHECK(vdms::parse_channel_kind("PD") == ChannelKind::PD);
  CHECK(vdms::parse_channel_kind("Dep") == ChannelKind::Dep);
  CHECK(vdms::parse_channel_target("auxiliary") == ChannelTarget::Auxiliary);
  CHECK_THROWS_AS(vdms::parse_channel_kind("bitflip"), Error);
  CHECK_THROWS_AS((NoiseChannel{ChannelKind::AD, -0.1, ChannelTarget::Main}.validate()), Error);
  CHECK_THROWS_AS((NoiseChannel{ChannelKind::AD, 0.1, ChannelTarget::Main}.jump_operators(3)),
                  Error);
}

TEST_CASE("jump operators act on the requested factor") {
  const auto ad = NoiseChannel{ChannelKind::AD, 0.25, ChannelTarget::Main}.jump_operators(2);
  REQUIRE(ad.size() == 1);
  CHECK(fro(ad[0] - 0.5 * kron(eye(2), lowering())) == 0.0);
  const auto dep = NoiseChannel{ChannelKind::Dep, 0.25, ChannelTarget::Auxiliary}.jump_operators(2);
  REQUIRE(dep.size() == 3);
  CHECK(fro(dep[1] - 0.5 * kron(sigma_y(), eye(2))) == 0.0);
}

TEST_CASE("Lindbladian dimensions and the closed-system limit") {
  std::mt19937_64 rng(kSeed + 2);
  const Mat h = random_hermitian(rng, 4);
  const std::vector<NoiseChannel> none;
  const Mat l0 = vdms::lindbladian_at(h, none);
  CHECK(l0.rows() == 16);
  CHECK(l0.cols() == 16);
  CHECK(fro(l0 - (-kI) * (kron(h, eye(4)) - kron(eye(4), h.transpose()))) < 1e-14);
  const std::vector<NoiseChannel> zero{{ChannelKind::Dep, 0.0, ChannelTarget::Main}};
  const Eigen::VectorXcd ev = Eigen::ComplexEigenSolver<Mat>(vdms::lindbladian_at(h, zero)).eigenvalues();
  CHECK(ev.real().cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("Lindbladian matches the direct master-equation right-hand side") {
  std::mt19937_64 rng(kSeed + 3);
  for (ChannelKind kind : {ChannelKind::AD, ChannelKind::PD, ChannelKind::Dep}) {
    const Mat h = random_hermitian(rng, 4);
    const Mat rho = random_psd(rng, 4);
    const std::vector<NoiseChannel> chans{{kind, 0.3, ChannelTarget::Main}};
    const Mat via_super = vdms::unvec(vdms::lindbladian_at(h, chans) * vdms::vec(rho), 4);
    CHECK(fro(via_super - lindblad_rhs(h, main_jumps(kind, 0.3), rho)) < 1e-12);
  }
}

TEST_CASE("vec(I)^dagger L = 0 along the unbroken dilation") {
  dilation::MetricFlow flow(hamiltonian::two_level({0.6, 1.0, std::numbers::pi / 2}), 5.0 * eye(2),
                            MagnusOptions{});
  const std::vector<NoiseChannel> chans{{ChannelKind::AD, 0.25, ChannelTarget::Main},
                                        {ChannelKind::Dep, 0.1, ChannelTarget::Auxiliary}};
  const Eigen::VectorXcd vid = row_stack(eye(4));
  for (double t : {0.0, 0.4, 2.2, 7.9}) {
    const Mat l = vdms::lindbladian_at(flow.frame(t).h_as, chans);
    CHECK((vid.adjoint() * l).norm() < 1e-10);
  }
}

TEST_CASE("closed master evolution reproduces the dilation route") {
  const auto hs = hamiltonian::two_level({0.6, 1.0, std::numbers::pi / 2});
  const Mat m0 = 5.0 * eye(2);
  Mat rho0 = Mat::Zero(2, 2);
  rho0(0, 0) = 0.2;
  MagnusOptions o;
  o.h = 0.05;
  const std::vector<double> grid = evolution::sample_grid(2.0, 0.1);
  const auto dil = evolution::evolve_dilation(hs, m0, rho0, grid, o);

  auto flow = std::make_shared<dilation::MetricFlow>(hs, m0, o);
  const magnus::MatrixSource h_as(4, [flow](double t) { return flow->frame(t).h_as; });
  const std::vector<NoiseChannel> chans{{ChannelKind::PD, 0.0, ChannelTarget::Main}};
  const Mat rho_as0 = evolution::embed(rho0, flow->frame(0.0).xi).rho_as;
  const auto master = vdms::evolve_master(vdms::lindbladian(h_as, chans), rho_as0, grid, o);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    CHECK(evolution::delta_rho(master.rho[k], dil.rho[k]) < 1e-9);
  }
}

TEST_CASE("single-qubit fixed points") {
  // One qubit addressed through the auxiliary slot with a trivial main system.
  const Mat zero_h = Mat::Zero(2, 2);
  Mat rho0(2, 2);
  rho0 << 0.3, Complex(0.2, 0.1), Complex(0.2, -0.1), 0.7;
  MagnusOptions o;
  o.h = 0.1;
  const std::vector<double> grid = evolution::sample_grid(40.0, 1.0);

  const std::vector<NoiseChannel> dep{{ChannelKind::Dep, 0.5, ChannelTarget::Auxiliary}};
  const Mat ldep = vdms::lindbladian_at(zero_h, dep);
  const auto dtraj = vdms::evolve_master(magnus::MatrixSource(4, [ldep](double) { return ldep; }, true),
                                         rho0, grid, o);
  CHECK(fro(dtraj.rho.back() - eye(2) / 2.0) < 1e-8);
  for (std::size_t k = 1; k <= 5; ++k) {
    CHECK(std::abs(dtraj.rho[k](0, 1)) < std::abs(dtraj.rho[k - 1](0, 1)));
  }

  const std::vector<NoiseChannel> ad{{ChannelKind::AD, 1.0, ChannelTarget::Auxiliary}};
  const Mat lad = vdms::lindbladian_at(zero_h, ad);
  const auto atraj = vdms::evolve_master(magnus::MatrixSource(4, [lad](double) { return lad; }, true),
                                         rho0, grid, o);
  Mat ground = Mat::Zero(2, 2);
  ground(0, 0) = 1.0;
  CHECK(fro(atraj.rho.back() - ground) < 1e-6);
}

TEST_CASE("noisy evolution keeps trace and Hermiticity") {
  const auto hs = hamiltonian::two_level({0.6, 1.0, std::numbers::pi / 2});
  const Mat m0 = 5.0 * eye(2);
  Mat rho0 = Mat::Zero(2, 2);
  rho0(0, 0) = 0.2;
  MagnusOptions o;
  o.h = 0.05;
  auto flow = std::make_shared<dilation::MetricFlow>(hs, m0, o);
  const magnus::MatrixSource h_as(4, [flow](double t) { return flow->frame(t).h_as; });
  const std::vector<NoiseChannel> chans{{ChannelKind::Dep, 0.25, ChannelTarget::Main}};
  const Mat rho_as0 = evolution::embed(rho0, flow->frame(0.0).xi).rho_as;
  const std::vector<double> grid = evolution::sample_grid(2.0, 0.1);
  const auto traj = vdms::evolve_master(vdms::lindbladian(h_as, chans), rho_as0, grid, o);
  for (const auto& rho : traj.rho) {
    CHECK(std::abs(rho.trace() - Complex(1.0)) < 1e-6);
    CHECK(fro(rho - rho.adjoint()) < 1e-8);
  }
}

TEST_CASE("a non-physical generator trips the positivity monitor") {
  const Mat zero_h = Mat::Zero(2, 2);
  const std::vector<NoiseChannel> ad{{ChannelKind::AD, 1.0, ChannelTarget::Auxiliary}};
  const Mat reversed = -vdms::lindbladian_at(zero_h, ad);
  Mat excited = Mat::Zero(2, 2);
  excited(1, 1) = 1.0;
  MagnusOptions o;
  o.h = 0.1;
  const std::vector<double> grid = evolution::sample_grid(1.0, 0.1);
  try {
    vdms::evolve_master(magnus::MatrixSource(4, [reversed](double) { return reversed; }, true),
                        excited, grid, o);
    FAIL("expected PositivityViolation");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::PositivityViolation);
  }
}

}  // TEST_SUITE
