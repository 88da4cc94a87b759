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

#include "spinforge/evolve.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "spinforge/errors.hpp"

namespace spinforge {

Operator exact_unitary(const PulseSegment& segment) {
  const int n = segment.n_qubits();
  const double scale = build_h0(segment.coeffs(), n).max_abs();
  const double residual = verify_commuting(segment);
  if (residual > kCommutingTolerance * std::max(scale * scale, 1e-300)) {
    std::ostringstream os;
    os << "segment Hamiltonian does not commute with itself (max commutator "
       << residual << ")";
    throw CommutationError(os.str());
  }
  Operator generator = Operator::zero(n);
  for (std::size_t b = 0; b < segment.blocks().size(); ++b) {
    const double area = segment.blocks()[b].shape.cumulative(1.0);
    generator = generator + area * block_h0(segment, b);
  }
  return hermitian_expm(generator, 1.0);
}

Operator trotter_unitary(const PulseSegment& segment, int n_steps) {
  if (n_steps < 1) {
    throw ValidationError("trotter_unitary: n_steps must be >= 1");
  }
  const double dt = 1.0 / n_steps;
  Matrix u = Matrix::Identity(std::int64_t{1} << segment.n_qubits(),
                              std::int64_t{1} << segment.n_qubits());
  for (int m = 0; m < n_steps; ++m) {
    const double tau = (m + 0.5) * dt;
    const Operator step = hermitian_expm(scaled_hamiltonian(segment, tau), dt);
    u = step.matrix() * u;
  }
  return Operator(segment.n_qubits(), std::move(u));
}

Operator sequence_unitary(std::span<const PulseSegment> segments) {
  if (segments.empty()) {
    throw ValidationError("sequence_unitary: empty schedule");
  }
  Operator u = exact_unitary(segments.front());
  for (std::size_t k = 1; k < segments.size(); ++k) {
    u = exact_unitary(segments[k]) * u;
  }
  return u;
}

Operator sequence_unitary(const Schedule& schedule) {
  return sequence_unitary(schedule.segments);
}

FidelityReport gate_fidelity(const Operator& u, const Operator& v,
                             std::string target_name) {
  if (u.dim() != v.dim()) {
    throw DimensionError("gate_fidelity: dimension mismatch");
  }
  if (!u.is_unitary() || !v.is_unitary()) {
    throw ValidationError("gate_fidelity: inputs must be unitary");
  }
  const Complex overlap = (v.matrix().adjoint() * u.matrix()).trace();
  FidelityReport r;
  r.fidelity = std::abs(overlap) / static_cast<double>(u.dim());
  r.global_phase = std::arg(overlap);
  const Complex phase = std::polar(1.0, r.global_phase);
  r.max_elementwise_error =
      (u.matrix() - phase * v.matrix()).cwiseAbs().maxCoeff();
  r.target_name = std::move(target_name);
  return r;
}

namespace {

double fractional(double cycles) { return cycles - std::floor(cycles); }

bool near_integer(double cycles, double tolerance) {
  const double f = fractional(cycles);
  return std::min(f, 1.0 - f) < tolerance;
}

}  // namespace

RotatingFrameReport rotating_frame_check(const Schedule& schedule,
                                         double tolerance) {
  const double omega = schedule.device.omega_rf_idle();
  RotatingFrameReport r;
  std::ostringstream warn;
  for (std::size_t k = 0; k < schedule.segments.size(); ++k) {
    const double cycles =
        omega * schedule.segments[k].duration() / (2.0 * std::numbers::pi);
    r.segment_cycles.push_back(cycles);
    r.segment_deficits.push_back(fractional(cycles));
    r.total_cycles += cycles;
    if (!near_integer(cycles, tolerance)) {
      r.pass = false;
      warn.precision(10);
      warn << "segment " << k << " spans " << cycles
           << " carrier cycles (deficit " << fractional(cycles) << "); ";
    }
  }
  r.total_deficit = fractional(r.total_cycles);
  if (!near_integer(r.total_cycles, tolerance)) r.pass = false;
  if (!r.pass) {
    warn << "rotating and lab frame propagators differ by a Z rotation";
    r.warning = warn.str();
  }
  return r;
}

double integer_cycle_duration(double duration, double omega_rf) {
  const double period = 2.0 * std::numbers::pi / omega_rf;
  const double cycles = std::max(1.0, std::round(duration / period));
  return cycles * period;
}

}  // namespace spinforge
