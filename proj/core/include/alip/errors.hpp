/*
 Copyright 2026 The alip-stairs Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/

#pragma once

#include <stdexcept>
#include <string>

namespace alip {

/// Input outside the region where the pendulum model is defined
/// (CoM at or below the contact, non-positive length, non-finite state).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Curve or orbit evaluated outside its time interval.
class RangeError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// Invalid numeric parameter (step size, horizon length, bounds, ...).
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Dimension mismatch while assembling a matrix problem.
class ConstructionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Least-squares problem without enough independent data.
class RankError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Nominal orbit could not be synthesized for the requested geometry.
class SynthesisError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Singular or ill-conditioned block in a Schur-complement reduction.
class ReductionError : public std::runtime_error {
 public:
  ReductionError(const std::string& what, double condition)
      : std::runtime_error(what), condition_(condition) {}

  double condition() const noexcept { return condition_; }

 private:
  double condition_;
};

/// Output-tracking torque solve failed (rank-deficient decoupling matrix).
class ControlError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Non-finite value produced during integration.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or invalid configuration document. Carries the offending line
/// (0 when the problem is not tied to a single line).
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& what, int line = 0)
      : std::runtime_error(what), line_(line) {}

  int line() const noexcept { return line_; }

 private:
  int line_;
};

}  // namespace alip
