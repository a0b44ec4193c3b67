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
#include <numbers>

#include "frame_sampler.hpp"
#include "ptsim/dilation.hpp"
#include "ptsim/errors.hpp"
#include "support.hpp"

using namespace ptsim;
using namespace ptsim::testing;
using magnus::MagnusOptions;

namespace {

constexpr double kHalfPi = std::numbers::pi / 2.0;
const Complex kI(0.0, 1.0);

hamiltonian::Generator model(double r) { return hamiltonian::two_level({r, 1.0, kHalfPi}); }

double min_eig(const Mat& m) { return Eigen::SelfAdjointEigenSolver<Mat>(m).eigenvalues().minCoeff(); }

Eigen::VectorXd sorted_spectrum(const Mat& h) {
  return Eigen::SelfAdjointEigenSolver<Mat>(h).eigenvalues();
}

}  // namespace

TEST_SUITE("dilation") {

TEST_CASE("metric stays 5 I under a Hermitian time-independent H_S") {
  const auto hs = hamiltonian::two_level({0.8, 0.6, 0.0});
  const std::vector<double> grid{0.0, 0.37, 1.0, 2.5};
  for (const auto& s : dilation::m_trajectory(hs, 5.0 * eye(2), grid, MagnusOptions{})) {
    CHECK(fro(s.m - 5.0 * eye(2)) < 1e-12);
    CHECK(fro(s.mprime) < 1e-12);
  }
}

TEST_CASE("metric stays eta for an unbroken model started at its metric") {
  const Mat h = model(0.6)(0.0);
  const Mat eta = hamiltonian::metric_unbroken(h, 5.0);
  const std::vector<double> grid{0.0, 0.5, 3.0, 8.0};
  for (const auto& s : dilation::m_trajectory(model(0.6), eta, grid, MagnusOptions{})) {
    CHECK(fro(s.m - eta) < 1e-9);
  }
}

TEST_CASE("broken model loses legitimacy near t = 0.604") {
  const Mat m0 = 5.0 * eye(2);
  const std::vector<double> grid{0.0, 0.59, 0.6};
  const auto traj = dilation::m_trajectory(model(1.4), m0, grid, MagnusOptions{});
  CHECK(min_eig(traj[0].m) == doctest::Approx(5.0));
  CHECK(min_eig(traj[1].m) > 1.0);
  CHECK(min_eig(traj[2].m) < 1.0 + 0.05);
  const auto tl = dilation::legitimacy_time(model(1.4), m0, 2.0, MagnusOptions{});
  REQUIRE(tl.has_value());
  CHECK(std::abs(*tl - 0.604) <= 0.005);
}

TEST_CASE("legitimacy_time examples") {
  CHECK_FALSE(dilation::legitimacy_time(model(0.6), 5.0 * eye(2), 8.0, MagnusOptions{}).has_value());
  const auto five = dilation::legitimacy_time(model(1.4), 5.0 * eye(2), 3.0, MagnusOptions{});
  const auto ten = dilation::legitimacy_time(model(1.4), 10.0 * eye(2), 3.0, MagnusOptions{});
  REQUIRE(five.has_value());
  REQUIRE(ten.has_value());
  CHECK(*ten > *five);
}

TEST_CASE("initial metric must exceed the identity") {
  CHECK_THROWS_AS(dilation::validate_initial_metric(eye(2), 2), Error);
  CHECK_THROWS_AS(dilation::validate_initial_metric(5.0 * eye(3), 2), Error);
  CHECK_NOTHROW(dilation::validate_initial_metric(1.5 * eye(2), 2));
  try {
    dilation::MetricFlow(model(0.6), 0.5 * eye(2), MagnusOptions{});
    FAIL("expected InvalidM0");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::InvalidM0);
  }
}

TEST_CASE("frame of the unbroken model at t = 0 by hand") {
  const Mat m0 = 5.0 * eye(2);
  const Mat h = model(0.6)(0.0);
  // M'(0) = -i (H^dagger M - M H) = -6 sigma_z for M = 5 I.
  const Mat mprime = kI * -1.0 * (h.adjoint() * m0 - m0 * h);
  CHECK(fro(mprime + 6.0 * sigma_z()) < 1e-14);
  const auto f = dilation::frame_at(model(0.6), 0.0, m0, mprime);
  CHECK(fro(f.k - 0.2 * sigma_x()) < 1e-13);
  CHECK(fro(f.xi - 2.0 * eye(2)) < 1e-13);
  CHECK(fro(f.xiprime + 1.5 * sigma_z()) < 1e-13);
  CHECK(fro(f.h2 - 0.3 * kI * sigma_z()) < 1e-13);
  CHECK(fro(f.h1 - sigma_x()) < 1e-13);
  const Eigen::VectorXd ev = sorted_spectrum(f.h_as);
  const double e = std::sqrt(1.09);
  CHECK(ev(0) == doctest::Approx(-e));
  CHECK(ev(1) == doctest::Approx(-e));
  CHECK(ev(2) == doctest::Approx(e));
  CHECK(ev(3) == doctest::Approx(e));
  // The flow reproduces the same frame.
  dilation::MetricFlow flow(model(0.6), m0, MagnusOptions{});
  CHECK(fro(flow.frame(0.0).h_as - f.h_as) < 1e-13);
}

TEST_CASE("Hermitian limit collapses the dilation to I (x) H") {
  const auto hs = hamiltonian::two_level({0.4, 0.9, 0.0});
  const Mat h = hs(0.0);
  const auto f = dilation::frame_at(hs, 0.0, 3.0 * eye(2), Mat::Zero(2, 2));
  CHECK(fro(f.h2) < 1e-13);
  CHECK(fro(f.h1 - h) < 1e-13);
  CHECK(fro(f.h4 - h) < 1e-13);
  CHECK(fro(f.h_as - kron(eye(2), h)) < 1e-13);
  const auto po = dilation::pseudo_observables(f);
  CHECK(fro(po.h_s - h) < 1e-13);
  CHECK(fro(po.h_phys - h) < 1e-13);
}

TEST_CASE("frame construction rejects an illegitimate metric") {
  Mat m = 5.0 * eye(2);
  m(1, 1) = 1.0;
  try {
    dilation::frame_at(model(0.6), 0.0, m, Mat::Zero(2, 2));
    FAIL("expected LegitimacyViolated");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::LegitimacyViolated);
  }
}

TEST_CASE("pseudo_observables at t = 0 and pseudo-Hermiticity on random frames") {
  const Mat m0 = 5.0 * eye(2);
  dilation::MetricFlow flow(model(0.6), m0, MagnusOptions{});
  CHECK(fro(dilation::pseudo_observables(flow.frame(0.0)).h_s - sigma_x()) < 1e-13);
  for (const auto& s : sample_frames(100, kSeed)) {
    const Mat hs = dilation::pseudo_observables(s.frame).h_s;
    const Mat& m = s.frame.m;
    CHECK(fro(m * hs - hs.adjoint() * m) <= 1e-9 * fro(m) * fro(hs));
  }
}

TEST_CASE("random frames satisfy every structural identity") {
  int broken = 0;
  int symmetric = 0;
  for (const auto& s : sample_frames(300, kSeed + 1)) {
    const auto r = dilation::frame_residuals(s.frame, s.hs_t);
    CHECK(r.min_eig_m > 1.0);
    CHECK(r.max_structural() <= 1e-9);
    CHECK(r.max_relation() <= 1e-8);
    // Independent restatement of the defining relations.
    const auto& f = s.frame;
    CHECK(fro(f.h1 + f.h2 * f.xi - s.hs_t) <= 1e-8);
    CHECK(fro(f.h2.adjoint() + f.h4 * f.xi - kI * f.xiprime - f.xi * s.hs_t) <= 1e-8);
    CHECK(fro(-f.h1 * f.xi + f.h2 + kI * f.xiprime + f.xi * s.hs_t) <= 1e-8);
    CHECK(fro(-f.h2.adjoint() * f.xi + f.h4 - s.hs_t) <= 1e-8);
    if (s.symmetric_family) {
      const Eigen::VectorXd ev = sorted_spectrum(f.h_as);
      const auto n = ev.size();
      for (Eigen::Index i = 0; i < n; ++i) CHECK(std::abs(ev(i) + ev(n - 1 - i)) <= 1e-8);
      ++symmetric;
    }
    broken += s.broken ? 1 : 0;
  }
  CHECK(broken > 0);
  CHECK(symmetric > 0);
}

TEST_CASE("frame_residuals flags a corrupted frame") {
  dilation::MetricFlow flow(model(0.6), 5.0 * eye(2), MagnusOptions{});
  auto f = flow.frame(0.3);
  f.h2(0, 1) += 0.01;
  CHECK(dilation::frame_residuals(f, model(0.6)(0.3)).max_structural() > 1e-3);
}

TEST_CASE("descending spectrum ordering") {
  dilation::MetricFlow flow(model(0.6), 5.0 * eye(2), MagnusOptions{});
  const auto e = dilation::dilated_spectrum_descending(flow.frame(1.0));
  for (Eigen::Index i = 1; i < e.size(); ++i) CHECK(e(i - 1) >= e(i));
}

TEST_CASE("time-independent shortcut examples") {
  const Mat h = model(0.6)(0.0);
  const Mat eta = hamiltonian::metric_unbroken(h, 5.0);
  const auto f = dilation::ti_unbroken_shortcut(h, eta);
  const Eigen::VectorXd ev = sorted_spectrum(f.h_as);
  CHECK(std::abs(ev(0) + 0.8) < 1e-9);
  CHECK(std::abs(ev(1) + 0.8) < 1e-9);
  CHECK(std::abs(ev(2) - 0.8) < 1e-9);
  CHECK(std::abs(ev(3) - 0.8) < 1e-9);
  CHECK(fro(f.xiprime) == 0.0);

  const Mat herm = hamiltonian::two_level({0.3, 1.2, 0.0})(0.0);
  CHECK(fro(dilation::ti_unbroken_shortcut(herm, 4.0 * eye(2)).h_as - kron(eye(2), herm)) < 1e-12);

  try {
    dilation::ti_unbroken_shortcut(h, 5.0 * eye(2));
    FAIL("expected MetricMismatch");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::MetricMismatch);
  }
}

TEST_CASE("shortcut equals the general pipeline started at the metric") {
  const Mat h = model(0.6)(0.0);
  const Mat eta = hamiltonian::metric_unbroken(h, 5.0);
  const auto shortcut = dilation::ti_unbroken_shortcut(h, eta);
  dilation::MetricFlow flow(model(0.6), eta, MagnusOptions{});
  for (double t : {0.0, 0.1, 1.7, 5.0, 8.0}) {
    CHECK(fro(flow.frame(t).h_as - shortcut.h_as) <= 1e-10);
  }
}

}  // TEST_SUITE
