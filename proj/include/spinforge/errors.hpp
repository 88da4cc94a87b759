// Copyright 2026 The spinforge Authors
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
#include <utility>

namespace spinforge {

// Input failed a structural or numerical validity check (non-Hermitian
// generator, array length mismatch, nonzero shape endpoints, ...).
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Operands have incompatible dimensions.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A shape profile integrates to zero and cannot be normalized.
class DegenerateShapeError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// The requested rotation cannot be realized: the non-resonant qubits cannot
// complete a 2*pi rotation when |theta| * sqrt(nx^2 + ny^2) > 2*pi.
class InfeasibleRotationError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A segment's Hamiltonian does not commute with itself at different times,
// so its propagator is not an ordinary matrix exponential.
class CommutationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A set of gates cannot share one pulse segment. `rule()` names the
// parallel-execution requirement that was violated.
class SchedulingError : public std::runtime_error {
 public:
  SchedulingError(std::string rule, const std::string& detail)
      : std::runtime_error(rule + ": " + detail), rule_(std::move(rule)) {}

  const std::string& rule() const noexcept { return rule_; }

 private:
  std::string rule_;
};

}  // namespace spinforge
