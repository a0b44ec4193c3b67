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

#include <stdexcept>
#include <string>

namespace ptsim {

/// Every failure raised by the library carries one of these codes so that
/// callers (the CLI in particular) can map it to an exit status.
enum class ErrorKind {
  NotHermitian,
  NotPSD,
  NonFinite,
  DimensionMismatch,
  SingularSylvester,
  BrokenPhase,
  DegenerateSpectrum,
  ConvergenceViolation,
  InvalidM0,
  LegitimacyViolated,
  MetricMismatch,
  VanishingPostSelection,
  ZeroState,
  PositivityViolation,
  InvalidArgument,
};

const char* to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Magnus step whose norm integral reached pi; carries the step context.
class ConvergenceError : public Error {
 public:
  ConvergenceError(double t0, double t1, double integral);

  double step_begin() const noexcept { return t0_; }
  double step_end() const noexcept { return t1_; }
  double integral() const noexcept { return integral_; }

 private:
  double t0_;
  double t1_;
  double integral_;
};

}  // namespace ptsim
