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

// Test-side helpers and oracles. Nothing here calls into the library's
// numerics so that expected values stay independent of the code under test.

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>

#include <Eigen/Dense>

namespace ptsim::testing {

using Complex = std::complex<double>;
using Mat = Eigen::MatrixXcd;

inline constexpr std::uint64_t kSeed = 0x5eed2026u;

inline Mat random_matrix(std::mt19937_64& rng, int n, double scale = 1.0) {
  std::normal_distribution<double> g(0.0, scale);
  Mat a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = Complex(g(rng), g(rng));
  return a;
}

inline Mat random_hermitian(std::mt19937_64& rng, int n, double scale = 1.0) {
  const Mat a = random_matrix(rng, n, scale);
  return (a + a.adjoint()) / 2.0;
}

inline Mat random_psd(std::mt19937_64& rng, int n) {
  const Mat a = random_matrix(rng, n);
  return a * a.adjoint();
}

inline Mat sigma_x() { Mat m(2, 2); m << 0, 1, 1, 0; return m; }
inline Mat sigma_y() { Mat m(2, 2); m << 0, Complex(0, -1), Complex(0, 1), 0; return m; }
inline Mat sigma_z() { Mat m(2, 2); m << 1, 0, 0, -1; return m; }
inline Mat eye(int n) { return Mat::Identity(n, n); }

/// exp(-i (a . sigma) dt) in closed form.
inline Mat su2_exp(double ax, double ay, double az, double dt) {
  const double norm = std::sqrt(ax * ax + ay * ay + az * az);
  if (norm == 0.0) return eye(2);
  const double c = std::cos(norm * dt);
  const double s = std::sin(norm * dt) / norm;
  return c * eye(2) - Complex(0, 1) * s * (ax * sigma_x() + ay * sigma_y() + az * sigma_z());
}

/// Ordered product of closed-form exponentials of -i(sigma_x + t sigma_z),
/// sampled at sub-interval midpoints with step delta.
inline Mat linear_sweep_oracle(double t0, double t1, double delta) {
  const long n = std::max(1L, std::lround((t1 - t0) / delta));
  const double d = (t1 - t0) / static_cast<double>(n);
  Mat u = eye(2);
  for (long j = 0; j < n; ++j) {
    const double tm = t0 + (static_cast<double>(j) + 0.5) * d;
    u = su2_exp(1.0, 0.0, tm, d) * u;
  }
  return u;
}

inline Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

inline double fro(const Mat& a) { return a.norm(); }

/// Closed-form populations for the two-level model at theta = pi/2, s = 1,
/// evolved from |0>; written independently of the library routine.
inline double reference_pn0(double r, double t) {
  if (std::abs(r - 1.0) < 1e-12) {
    const double a = (t + 1.0) * (t + 1.0);
    return a / (a + t * t);
  }
  const Complex a = std::sqrt(Complex(r * r - 1.0, 0.0));
  const Complex ep = std::exp(a * t);
  const Complex em = std::exp(-a * t);
  const double num = std::norm(ep * (r + a) - em * (r - a));
  const double other = std::norm(Complex(0, 1) * em - Complex(0, 1) * ep);
  return num / (num + other);
}

}  // namespace ptsim::testing
