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

// File formats: device/circuit/schedule/problem JSON and the sampled pulse
// table CSV.
//
// Pulse table layout:
//   t_s,g_0,...,g_{N-1},J_0,...,J_{N-2},b_rf_T,omega_rf_rad_s,phi_rad
//   #segment 0
//   <rows>
//   #segment 1
//   <rows; the first t repeats the previous segment's last t>
// Values are written with 17 significant digits.

#include <filesystem>
#include <iosfwd>
#include <json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "spinforge/errors.hpp"
#include "spinforge/evolve.hpp"
#include "spinforge/optimize.hpp"
#include "spinforge/synthesis.hpp"

namespace spinforge {

using json = nlohmann::json;

// Malformed input document. The message starts with the offending field path
// (or line/column for syntax errors).
class SchemaError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

json read_json_file(const std::filesystem::path& path);
void write_json_file(const std::filesystem::path& path, const json& doc);

DeviceConfig device_from_json(const json& j);
json to_json(const DeviceConfig& device);

// {kind: shifted_gaussian, sigma[, grid]} | {kind: constant[, grid]} |
// {kind: tabulated, csv: path | samples: [...]}. Relative csv paths resolve
// against base_dir.
ShapeFunction shape_from_json(const json& j,
                              const std::filesystem::path& base_dir = {});
json to_json(const ShapeFunction& shape);

// {real: [[...]], imag: [[...]]}; must be 2^N square.
Operator operator_from_json(const json& j);
json to_json(const Operator& op);

// One circuit step: a single gate or a parallel group sharing one segment.
struct CircuitStep {
  std::vector<GateSpec> gates;
  std::vector<ShapeFunction> shapes;  // one per gate; three for a CNOT
  double duration = 0.0;
  bool parallel = false;
};

struct CircuitRequest {
  DeviceConfig device;
  std::vector<CircuitStep> steps;
};

// {device: {...}, gates: [{kind, sites, params, shape, duration_s}, ...]}.
// kind is one of z_rotation, swap_pow, global_rotation, selective_rotation,
// cphase, cnot, parallel (params.gates lists the members).
CircuitRequest circuit_from_json(const json& j,
                                 const std::filesystem::path& base_dir = {});

// Synthesizes every step; the schedule target is the product of the ideal
// gate unitaries. An empty circuit yields an empty schedule with identity
// target.
Schedule compile_circuit(const CircuitRequest& circuit,
                         const SynthOptions& opts = {});

json to_json(const PulseSegment& segment);
PulseSegment segment_from_json(const json& j, int n_qubits,
                               bool allow_constant_shape = false);
json to_json(const Schedule& schedule);
Schedule schedule_from_json(const json& j, bool allow_constant_shape = false);

json to_json(const FidelityReport& report);

struct PulseTable {
  std::vector<std::string> columns;
  std::vector<std::vector<std::vector<double>>> segments;  // rows per segment
};

// samples_per_segment must be odd and >= 3.
void write_pulse_table(std::ostream& out, const Schedule& schedule,
                       int samples_per_segment = kDefaultShapeGrid);
PulseTable read_pulse_table(std::istream& in);

// Integrates one segment of a pulse table back to (A, beta, C, phi).
PulseCoefficients recover_coefficients(
    const std::vector<std::vector<double>>& rows, const DeviceConfig& device);

struct OptimizationRequest {
  OptimizationProblem problem;
  OptimizeOptions options;
  DeviceConfig device;
  ShapeFunction shape;
  double duration = 1e-6;
};

// {target: name | {real, imag}, n_segments, seed, method, max_iters, tol,
//  restarts, zero_init, max_evaluations, bounds: [[lo, hi], ...],
//  device, shape, duration_s}
OptimizationRequest optimization_from_json(
    const json& j, const std::filesystem::path& base_dir = {});

}  // namespace spinforge
