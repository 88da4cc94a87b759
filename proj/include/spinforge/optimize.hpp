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

// Few-parameter pulse-sequence optimization.
//
// Each segment contributes the coefficients of one generator
//   [A_0 .. A_{N-1}, beta, C_0 .. C_{N-2}, phi]
// so a problem with S segments has S * (2N + 1) parameters. Segment
// propagators are exp(-i H0), independent of the pulse shape.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "spinforge/synthesis.hpp"

namespace spinforge {

struct ParameterBounds {
  double lower = 0.0;
  double upper = 0.0;
};

class OptimizationProblem {
 public:
  // Default bounds: A, C in [-4 pi, 4 pi], beta in [0, 4 pi], phi in
  // [-pi, pi].
  OptimizationProblem(Operator target, int n_segments, std::uint64_t seed = 0);
  OptimizationProblem(Operator target, int n_segments,
                      std::vector<ParameterBounds> bounds,
                      std::uint64_t seed = 0);

  const Operator& target() const noexcept { return target_; }
  int n_qubits() const noexcept { return target_.n_qubits(); }
  int n_segments() const noexcept { return n_segments_; }
  int params_per_segment() const noexcept { return 2 * n_qubits() + 1; }
  int n_params() const noexcept { return n_segments_ * params_per_segment(); }
  const std::vector<ParameterBounds>& bounds() const noexcept {
    return bounds_;
  }
  std::uint64_t seed() const noexcept { return seed_; }

  static std::vector<ParameterBounds> default_bounds(int n_qubits,
                                                     int n_segments);

 private:
  Operator target_;
  int n_segments_;
  std::vector<ParameterBounds> bounds_;
  std::uint64_t seed_;
};

// Coefficients of segment `s` from a flat parameter vector.
PulseCoefficients unpack_segment(std::span<const double> params, int n_qubits,
                                 int segment);
std::vector<double> pack_segments(std::span<const PulseCoefficients> segments);

// Evaluates 1 - |Tr(target^dagger prod_s exp(-i H0_s))| / d with precomputed
// Pauli embeddings. Thread-compatible: one instance per thread.
class InfidelityObjective {
 public:
  explicit InfidelityObjective(const OptimizationProblem& problem);

  double operator()(std::span<const double> params) const;
  Matrix propagator(std::span<const double> params) const;
  std::int64_t evaluations() const noexcept { return evaluations_; }

 private:
  const OptimizationProblem& problem_;
  int n_;
  std::vector<Matrix> z_;
  std::vector<Matrix> exchange_;
  Matrix x_sum_;
  Matrix y_sum_;
  mutable std::int64_t evaluations_ = 0;
};

// Throws ValidationError when params has the wrong length.
double infidelity(std::span<const double> params,
                  const OptimizationProblem& problem);

// Central-difference gradient of the infidelity with step h.
std::vector<double> finite_difference_gradient(
    std::span<const double> params, const OptimizationProblem& problem,
    double h = 1e-6);

enum class OptimizerMethod { kNelderMead, kFiniteDiffGradient };

const char* to_string(OptimizerMethod method);
OptimizerMethod parse_optimizer_method(const std::string& name);

struct OptimizeOptions {
  OptimizerMethod method = OptimizerMethod::kNelderMead;
  int max_iters = 20000;  // per restart
  double tol = 1e-10;     // stop a restart once infidelity <= tol
  int restarts = 1;
  bool zero_init = false;  // first restart starts at the origin
  // Budget in objective evaluations across all restarts; 0 = unlimited.
  std::int64_t max_evaluations = 0;
};

struct OptimizationResult {
  std::vector<double> params;
  double infidelity = 1.0;
  bool converged = false;
  // Best-so-far infidelity after every iteration, across restarts.
  std::vector<double> trace;
  std::vector<double> restart_best;
  std::int64_t evaluations = 0;
};

// Deterministic given problem.seed().
OptimizationResult optimize_sequence(const OptimizationProblem& problem,
                                     const OptimizeOptions& options);

// Packs optimized parameters into a schedule with one shape per segment
// (a single shape is reused for every segment).
Schedule to_schedule(std::span<const double> params,
                     const OptimizationProblem& problem,
                     const DeviceConfig& device,
                     std::span<const ShapeFunction> shapes, double duration);

}  // namespace spinforge
