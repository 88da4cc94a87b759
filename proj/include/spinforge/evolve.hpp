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

#include <span>
#include <string>
#include <vector>

#include "spinforge/synthesis.hpp"

namespace spinforge {

// Relative threshold on verify_commuting: residual < tol * ||H0||^2.
inline constexpr double kCommutingTolerance = 1e-10;

// exp(-i sum_b H0_b * integral(S_b)). Throws CommutationError when the
// segment's Hamiltonian does not commute with itself.
Operator exact_unitary(const PulseSegment& segment);

// Time-ordered midpoint product prod_{m = n..1} exp(-i T H(t_m) dt/T).
// Independent of exact_unitary; also valid for non-commuting segments.
Operator trotter_unitary(const PulseSegment& segment, int n_steps);

// U_k ... U_2 U_1, first segment applied first.
Operator sequence_unitary(std::span<const PulseSegment> segments);
Operator sequence_unitary(const Schedule& schedule);

struct FidelityReport {
  double fidelity = 0.0;               // |Tr(V^dagger U)| / d
  double global_phase = 0.0;           // arg Tr(V^dagger U)
  double max_elementwise_error = 0.0;  // max|U - e^{i phase} V|
  std::string target_name;
};

// Phase-invariant overlap of u with target v. Throws ValidationError for
// non-unitary input and DimensionError for mismatched sizes.
FidelityReport gate_fidelity(const Operator& u, const Operator& v,
                             std::string target_name = {});

inline constexpr double kRotatingFrameTolerance = 1e-6;  // cycles

struct RotatingFrameReport {
  bool pass = true;
  std::vector<double> segment_cycles;    // omega_rf T / 2 pi
  std::vector<double> segment_deficits;  // fractional part of the cycles
  double total_cycles = 0.0;
  double total_deficit = 0.0;
  std::string warning;  // empty when every segment passes
};

// Checks that the rotating frame completes an integer number of carrier
// cycles per segment and over the whole schedule. Advisory only: a failing
// report carries a warning, never an exception.
RotatingFrameReport rotating_frame_check(
    const Schedule& schedule, double tolerance = kRotatingFrameTolerance);

// Nearest duration that holds an integer number of carrier cycles.
double integer_cycle_duration(double duration, double omega_rf);

}  // namespace spinforge
