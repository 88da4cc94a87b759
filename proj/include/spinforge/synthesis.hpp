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

// Gate requests -> pulse segments.
//
// Every synthesized segment has a Hamiltonian proportional to a constant
// generator H0 (per shape block), so its propagator is exp(-i H0) for any
// unit-mean shape. Targets are matched up to a global phase.

#include <array>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "spinforge/hamiltonian.hpp"

namespace spinforge {

struct ZRotation {
  int site = 0;
  double theta = 0.0;
};

// SWAP^k on the pair (site, site + 1).
struct SwapPower {
  int site = 0;
  double k = 1.0;
};

// Rotation of every qubit about (cos phi, sin phi, 0).
struct GlobalRotation {
  double phi = 0.0;
  double theta = 0.0;
};

// ROT(axis, theta) on the resonant sites; every other site completes a 2*pi
// rotation about a shifted axis.
struct SelectiveRotation {
  std::array<double, 3> axis{0.0, 0.0, 1.0};
  double theta = 0.0;
  std::vector<int> resonant;
};

// diag(1, 1, 1, e^{i alpha}) on the pair (site, site + 1).
struct ControlledPhase {
  int site = 0;
  double alpha = 0.0;
};

struct Cnot {
  int control = 0;
  int target = 1;
};

using GateSpec = std::variant<ZRotation, SwapPower, GlobalRotation,
                              SelectiveRotation, ControlledPhase, Cnot>;

std::string gate_name(const GateSpec& gate);

// Sign of A_- for the non-resonant qubits of a selective rotation.
enum class MinusBranch { kPlus, kMinus };

struct SynthOptions {
  MinusBranch minus_branch = MinusBranch::kPlus;
  bool allow_constant_shape = false;
};

struct Schedule {
  DeviceConfig device;
  std::vector<PulseSegment> segments;
  std::optional<Operator> target;
};

// Reduces an angle into (-2 pi, 2 pi].
double reduce_angle(double theta);

// One segment; sites with distinct shapes become separate shape blocks.
// `shapes` holds one shape per qubit.
PulseSegment synth_z_rotations(std::span<const double> angles,
                               std::span<const ShapeFunction> shapes,
                               double duration, const SynthOptions& opts = {});

PulseSegment synth_swap_pow(int site, double k, const ShapeFunction& shape,
                            double duration, int n_qubits,
                            const SynthOptions& opts = {});

PulseSegment synth_global_rotation(double phi_axis, double theta,
                                   const ShapeFunction& shape, double duration,
                                   int n_qubits, const SynthOptions& opts = {});

struct SelectiveRotationCoefficients {
  double a_plus = 0.0;
  double a_minus = 0.0;
  double beta = 0.0;
  double phi = 0.0;
};

// Throws InfeasibleRotationError when |theta| sqrt(nx^2 + ny^2) > 2 pi and
// ValidationError for a non-unit axis.
SelectiveRotationCoefficients selective_rotation_coefficients(
    const std::array<double, 3>& axis, double theta, MinusBranch branch);

PulseSegment synth_selective_rotation(const std::array<double, 3>& axis,
                                      double theta,
                                      std::span<const int> resonant,
                                      const ShapeFunction& shape,
                                      double duration, int n_qubits,
                                      const SynthOptions& opts = {});

struct CphaseCoefficients {
  double a1 = 0.0;  // Z angle on the left site of the pair
  double a2 = 0.0;  // Z angle on the right site
  double c = 0.0;   // exchange angle
};

// alpha is reduced into [0, 2 pi).
CphaseCoefficients cphase_coefficients(double alpha);

PulseSegment synth_cphase(int site, double alpha, const ShapeFunction& shape,
                          double duration, int n_qubits,
                          const SynthOptions& opts = {});

// Hadamard(target) with 2 pi on the control, CZ, Hadamard(target) again.
// sigmas are the shifted-Gaussian widths of the three pulses.
Schedule synth_cnot(int control, int target, std::array<double, 3> sigmas,
                    double duration_each, const DeviceConfig& device,
                    const SynthOptions& opts = {});

// Same as synth_cnot with caller-chosen shapes.
Schedule synth_cnot(int control, int target,
                    std::span<const ShapeFunction, 3> shapes,
                    double duration_each, const DeviceConfig& device,
                    const SynthOptions& opts = {});

// Merges gates into one segment following the parallel-execution rules of the
// two gate groups (voltage-only; ESR-driven). `shapes[i]` is the shape of
// `gates[i]`. Throws SchedulingError naming the violated rule.
PulseSegment schedule_parallel(std::span<const GateSpec> gates,
                               std::span<const ShapeFunction> shapes,
                               double duration, int n_qubits,
                               const SynthOptions& opts = {});

// Synthesizes a single gate; a CNOT yields three segments.
std::vector<PulseSegment> synthesize(const GateSpec& gate,
                                     const ShapeFunction& shape,
                                     double duration, int n_qubits,
                                     const SynthOptions& opts = {});

// Closed-form target unitaries, built without reference to pulses.
Operator rotation_matrix(const std::array<double, 3>& axis, double theta);
Operator ideal_unitary(const GateSpec& gate, int n_qubits);
Operator cnot_matrix(int control, int target, int n_qubits);
Operator cphase_matrix(int site, double alpha, int n_qubits);
Operator swap_pow_matrix(int site, double k, int n_qubits);
Operator cswap_matrix(int control, int a, int b, int n_qubits);

// Named targets: cnot, cz, swap (sites 0, 1), cswap (control 0, swap 1 and 2)
// and identity. Throws ValidationError for unknown names or too few qubits.
Operator named_target(const std::string& name, int n_qubits);

}  // namespace spinforge
