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

#include "spinforge/synthesis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "spinforge/errors.hpp"

namespace spinforge {
namespace {

using std::numbers::pi;
constexpr double kTwoPi = 2.0 * pi;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

Operator identity_on(int n_qubits) {
  return n_qubits == 0 ? Operator() : Operator::identity(n_qubits);
}

Operator embed_single(const Operator& op, int site, int n_qubits) {
  if (site < 0 || site >= n_qubits) {
    throw std::out_of_range("site " + std::to_string(site) +
                            " outside register of " + std::to_string(n_qubits) +
                            " qubits");
  }
  return kron(kron(identity_on(site), op), identity_on(n_qubits - site - 1));
}

void check_pair(int site, int n_qubits, const char* what) {
  if (site < 0 || site + 1 >= n_qubits) {
    throw std::out_of_range(std::string(what) + ": pair (" +
                            std::to_string(site) + ", " +
                            std::to_string(site + 1) + ") outside chain of " +
                            std::to_string(n_qubits) + " qubits");
  }
}

void check_axis(const std::array<double, 3>& axis) {
  const double norm = std::hypot(axis[0], axis[1], axis[2]);
  if (std::abs(norm - 1.0) > 1e-12) {
    throw ValidationError("rotation axis must have unit norm");
  }
}

double reduce_swap_power(double k) {
  double r = std::fmod(k, 2.0);
  if (r < 0.0) r += 2.0;
  return r >= 2.0 ? 0.0 : r;
}

double reduce_phase_angle(double alpha) {
  double r = std::fmod(alpha, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  return r >= kTwoPi ? 0.0 : r;
}

Eigen::Index bit_of(int site, int n_qubits) {
  return Eigen::Index{1} << (n_qubits - 1 - site);
}

// Merges blocks that carry identical shapes.
std::vector<ShapeBlock> merge_blocks(std::vector<ShapeBlock> blocks) {
  std::vector<ShapeBlock> merged;
  for (ShapeBlock& b : blocks) {
    auto it = std::find_if(merged.begin(), merged.end(),
                           [&](const auto& m) { return m.shape == b.shape; });
    if (it == merged.end()) {
      merged.push_back(std::move(b));
      continue;
    }
    it->sites.insert(it->sites.end(), b.sites.begin(), b.sites.end());
    it->couplings.insert(it->couplings.end(), b.couplings.begin(),
                         b.couplings.end());
    it->esr = it->esr || b.esr;
  }
  for (ShapeBlock& m : merged) {
    std::sort(m.sites.begin(), m.sites.end());
    std::sort(m.couplings.begin(), m.couplings.end());
  }
  return merged;
}

// Adds every site, coupling and the ESR drive not yet covered to `blocks`
// under `shape`. Uncovered terms carry zero coefficients.
void cover_remaining(std::vector<ShapeBlock>& blocks,
                     const ShapeFunction& shape, int n_qubits) {
  std::vector<bool> site_used(n_qubits, false);
  std::vector<bool> coupling_used(std::max(n_qubits - 1, 0), false);
  bool esr_used = false;
  for (const ShapeBlock& b : blocks) {
    for (int s : b.sites) site_used[s] = true;
    for (int c : b.couplings) coupling_used[c] = true;
    esr_used = esr_used || b.esr;
  }
  ShapeBlock rest{shape, {}, {}, !esr_used};
  for (int s = 0; s < n_qubits; ++s) {
    if (!site_used[s]) rest.sites.push_back(s);
  }
  for (int c = 0; c + 1 < n_qubits; ++c) {
    if (!coupling_used[c]) rest.couplings.push_back(c);
  }
  if (!rest.sites.empty() || !rest.couplings.empty() || rest.esr) {
    blocks.push_back(std::move(rest));
  }
}

constexpr double kCommutationTolerance = 1e-10;

void ensure_commuting(const PulseSegment& segment, const char* rule) {
  const double scale = build_h0(segment.coeffs(), segment.n_qubits()).max_abs();
  const double residual = verify_commuting(segment);
  if (residual > kCommutationTolerance * std::max(scale * scale, 1.0)) {
    std::ostringstream os;
    os << "merged Hamiltonian does not commute with itself (residual "
       << residual << ")";
    throw SchedulingError(rule, os.str());
  }
}

}  // namespace

std::string gate_name(const GateSpec& gate) {
  return std::visit(
      Overloaded{
          [](const ZRotation& g) {
            return "rz(" + std::to_string(g.theta) + ")@" +
                   std::to_string(g.site);
          },
          [](const SwapPower& g) {
            return "swap^" + std::to_string(g.k) + "@" + std::to_string(g.site);
          },
          [](const GlobalRotation& g) {
            return "global_rotation(" + std::to_string(g.theta) + ")";
          },
          [](const SelectiveRotation& g) {
            return "selective_rotation(" + std::to_string(g.theta) + ")";
          },
          [](const ControlledPhase& g) {
            return "cphase(" + std::to_string(g.alpha) + ")@" +
                   std::to_string(g.site);
          },
          [](const Cnot& g) {
            return "cnot(" + std::to_string(g.control) + "->" +
                   std::to_string(g.target) + ")";
          },
      },
      gate);
}

double reduce_angle(double theta) {
  double r = std::remainder(theta, 2.0 * kTwoPi);  // [-2 pi, 2 pi]
  if (r <= -kTwoPi) r += 2.0 * kTwoPi;
  return r;
}

PulseSegment synth_z_rotations(std::span<const double> angles,
                               std::span<const ShapeFunction> shapes,
                               double duration, const SynthOptions& opts) {
  const int n = static_cast<int>(angles.size());
  register_dim(n);
  if (shapes.size() != angles.size() && shapes.size() != 1) {
    throw ValidationError("synth_z_rotations: need one shape per qubit");
  }
  PulseCoefficients coeffs = PulseCoefficients::zeros(n);
  std::vector<ShapeBlock> blocks;
  for (int j = 0; j < n; ++j) {
    coeffs.a[j] = reduce_angle(angles[j]);
    blocks.push_back(
        {shapes.size() == 1 ? shapes[0] : shapes[j], {j}, {}, false});
  }
  cover_remaining(blocks, blocks.front().shape, n);
  return PulseSegment(std::move(coeffs), merge_blocks(std::move(blocks)),
                      duration, opts.allow_constant_shape);
}

PulseSegment synth_swap_pow(int site, double k, const ShapeFunction& shape,
                            double duration, int n_qubits,
                            const SynthOptions& opts) {
  register_dim(n_qubits);
  check_pair(site, n_qubits, "synth_swap_pow");
  PulseCoefficients coeffs = PulseCoefficients::zeros(n_qubits);
  coeffs.c[site] = pi * reduce_swap_power(k);
  return PulseSegment(std::move(coeffs), shape, duration,
                      opts.allow_constant_shape);
}

PulseSegment synth_global_rotation(double phi_axis, double theta,
                                   const ShapeFunction& shape, double duration,
                                   int n_qubits, const SynthOptions& opts) {
  PulseCoefficients coeffs = PulseCoefficients::zeros(n_qubits);
  const double reduced = reduce_angle(theta);
  coeffs.beta = std::abs(reduced);
  coeffs.phi = wrap_phase(reduced < 0.0 ? phi_axis + pi : phi_axis);
  return PulseSegment(std::move(coeffs), shape, duration,
                      opts.allow_constant_shape);
}

SelectiveRotationCoefficients selective_rotation_coefficients(
    const std::array<double, 3>& axis, double theta, MinusBranch branch) {
  check_axis(axis);
  if (!std::isfinite(theta)) {
    throw ValidationError("rotation angle must be finite");
  }
  const double transverse = std::hypot(axis[0], axis[1]);
  const double drive = std::abs(theta) * transverse;
  if (drive > kTwoPi) {
    std::ostringstream os;
    os << "|theta| sqrt(nx^2 + ny^2) = " << drive
       << " exceeds 2 pi; non-resonant qubits cannot complete a 2 pi rotation";
    throw InfeasibleRotationError(os.str());
  }
  const double sign_theta = theta < 0.0 ? -1.0 : 1.0;
  SelectiveRotationCoefficients out;
  out.a_plus = axis[2] * theta;
  out.a_minus = std::sqrt(std::max(kTwoPi * kTwoPi - drive * drive, 0.0));
  if (branch == MinusBranch::kMinus) out.a_minus = -out.a_minus;
  out.beta = drive;
  out.phi = std::atan2(axis[1] * sign_theta, axis[0] * sign_theta);
  return out;
}

PulseSegment synth_selective_rotation(const std::array<double, 3>& axis,
                                      double theta,
                                      std::span<const int> resonant,
                                      const ShapeFunction& shape,
                                      double duration, int n_qubits,
                                      const SynthOptions& opts) {
  register_dim(n_qubits);
  const auto k =
      selective_rotation_coefficients(axis, theta, opts.minus_branch);
  PulseCoefficients coeffs = PulseCoefficients::zeros(n_qubits);
  std::fill(coeffs.a.begin(), coeffs.a.end(), k.a_minus);
  std::vector<bool> seen(n_qubits, false);
  for (int s : resonant) {
    if (s < 0 || s >= n_qubits) {
      throw std::out_of_range("selective rotation: resonant site " +
                              std::to_string(s) + " out of range");
    }
    if (seen[s]) {
      throw ValidationError("selective rotation: duplicate resonant site");
    }
    seen[s] = true;
    coeffs.a[s] = k.a_plus;
  }
  coeffs.beta = k.beta;
  coeffs.phi = k.phi;
  return PulseSegment(std::move(coeffs), shape, duration,
                      opts.allow_constant_shape);
}

CphaseCoefficients cphase_coefficients(double alpha) {
  if (!std::isfinite(alpha)) {
    throw ValidationError("cphase angle must be finite");
  }
  // Block-diagonal generator: A1 + A2 = alpha fixes the |11> phase, and
  // (A1 - A2)^2 + C^2 = (2 pi)^2 with C = 2 pi - alpha makes the {01, 10}
  // block a scalar that matches |00>. The closed form is valid on all of
  // [0, 2 pi), so both halves of the interval share it.
  const double a = reduce_phase_angle(alpha);
  const double root = std::sqrt(a * (4.0 * pi - a));
  return {0.5 * (a + root), 0.5 * (a - root), kTwoPi - a};
}

PulseSegment synth_cphase(int site, double alpha, const ShapeFunction& shape,
                          double duration, int n_qubits,
                          const SynthOptions& opts) {
  register_dim(n_qubits);
  check_pair(site, n_qubits, "synth_cphase");
  const auto k = cphase_coefficients(alpha);
  PulseCoefficients coeffs = PulseCoefficients::zeros(n_qubits);
  coeffs.a[site] = k.a1;
  coeffs.a[site + 1] = k.a2;
  coeffs.c[site] = k.c;
  return PulseSegment(std::move(coeffs), shape, duration,
                      opts.allow_constant_shape);
}

Schedule synth_cnot(int control, int target,
                    std::span<const ShapeFunction, 3> shapes,
                    double duration_each, const DeviceConfig& device,
                    const SynthOptions& opts) {
  const int n = device.n_qubits();
  if (control < 0 || control >= n || target < 0 || target >= n) {
    throw std::out_of_range("synth_cnot: site out of range");
  }
  if (std::abs(control - target) != 1) {
    throw SchedulingError("nearest-neighbour-cnot",
                          "control " + std::to_string(control) +
                              " and target " + std::to_string(target) +
                              " are not adjacent");
  }
  const double h = 1.0 / std::numbers::sqrt2;
  const std::array<double, 3> hadamard_axis{h, 0.0, h};
  const std::array<int, 1> resonant{target};
  Schedule schedule{device, {}, cnot_matrix(control, target, n)};
  schedule.segments.push_back(synth_selective_rotation(
      hadamard_axis, pi, resonant, shapes[0], duration_each, n, opts));
  schedule.segments.push_back(synth_cphase(std::min(control, target), pi,
                                           shapes[1], duration_each, n, opts));
  schedule.segments.push_back(synth_selective_rotation(
      hadamard_axis, pi, resonant, shapes[2], duration_each, n, opts));
  return schedule;
}

Schedule synth_cnot(int control, int target, std::array<double, 3> sigmas,
                    double duration_each, const DeviceConfig& device,
                    const SynthOptions& opts) {
  const std::array<ShapeFunction, 3> shapes{shifted_gaussian(sigmas[0]),
                                            shifted_gaussian(sigmas[1]),
                                            shifted_gaussian(sigmas[2])};
  return synth_cnot(control, target, std::span<const ShapeFunction, 3>(shapes),
                    duration_each, device, opts);
}

namespace {

struct ParallelRules {
  static constexpr const char* kGroupMixing = "group-mixing";
  static constexpr const char* kSiteOverlap = "site-overlap";
  static constexpr const char* kSeparatedPairs = "separated-pairs";
  static constexpr const char* kSwapUnrotated = "swap-unaffected-by-rotations";
  static constexpr const char* kShapeEquality = "shape-equality";
  static constexpr const char* kSynchronous = "synchronous-rotation";
  static constexpr const char* kUnsupported = "unsupported-gate";
};

bool is_esr_gate(const GateSpec& g) {
  return std::holds_alternative<SelectiveRotation>(g) ||
         std::holds_alternative<GlobalRotation>(g);
}

void check_separated(std::span<const GateSpec> gates, int n_qubits) {
  std::vector<int> owner(std::max(n_qubits - 1, 0), -1);
  for (std::size_t i = 0; i < gates.size(); ++i) {
    int site = 0;
    if (const auto* s = std::get_if<SwapPower>(&gates[i])) {
      site = s->site;
    } else if (const auto* c = std::get_if<ControlledPhase>(&gates[i])) {
      site = c->site;
    } else {
      continue;
    }
    check_pair(site, n_qubits, "schedule_parallel");
    for (int c = std::max(site - 1, 0); c <= std::min(site + 1, n_qubits - 2);
         ++c) {
      if (owner[c] != -1) {
        throw SchedulingError(
            ParallelRules::kSeparatedPairs,
            "two-qubit gates " + gate_name(gates[owner[c]]) + " and " +
                gate_name(gates[i]) +
                " must act on separated pairs with no exchange between them");
      }
    }
    owner[site] = static_cast<int>(i);
  }
}

PulseSegment schedule_voltage_only(std::span<const GateSpec> gates,
                                   std::span<const ShapeFunction> shapes,
                                   double duration, int n,
                                   const SynthOptions& opts) {
  PulseCoefficients coeffs = PulseCoefficients::zeros(n);
  std::vector<ShapeBlock> blocks;
  std::vector<int> z_owner(n, -1);

  for (std::size_t i = 0; i < gates.size(); ++i) {
    if (const auto* z = std::get_if<ZRotation>(&gates[i])) {
      if (z->site < 0 || z->site >= n) {
        throw std::out_of_range("schedule_parallel: z rotation site");
      }
      if (z_owner[z->site] != -1) {
        throw SchedulingError(
            ParallelRules::kSiteOverlap,
            "qubit " + std::to_string(z->site) + " has two Z rotations");
      }
      z_owner[z->site] = static_cast<int>(i);
      coeffs.a[z->site] = reduce_angle(z->theta);
    }
  }

  for (std::size_t i = 0; i < gates.size(); ++i) {
    if (const auto* c = std::get_if<ControlledPhase>(&gates[i])) {
      for (int s : {c->site, c->site + 1}) {
        if (z_owner[s] != -1) {
          throw SchedulingError(ParallelRules::kSiteOverlap,
                                "qubit " + std::to_string(s) + " of " +
                                    gate_name(gates[i]) + " also has " +
                                    gate_name(gates[z_owner[s]]));
        }
      }
      const auto k = cphase_coefficients(c->alpha);
      coeffs.a[c->site] = k.a1;
      coeffs.a[c->site + 1] = k.a2;
      coeffs.c[c->site] = k.c;
      // Z and exchange terms of a CPHASE must share one shape.
      blocks.push_back({shapes[i], {c->site, c->site + 1}, {c->site}, false});
    } else if (const auto* w = std::get_if<SwapPower>(&gates[i])) {
      const int l = w->site;
      const int r = w->site + 1;
      const bool rl = z_owner[l] != -1;
      const bool rr = z_owner[r] != -1;
      if (rl || rr) {
        // Synchronous Z rotation of the whole pair commutes with the exchange.
        if (!(rl && rr) || coeffs.a[l] != coeffs.a[r]) {
          throw SchedulingError(
              ParallelRules::kSwapUnrotated,
              gate_name(gates[i]) +
                  " needs A_j = A_{j+1} = 0 unless both qubits rotate by the "
                  "same angle");
        }
        if (!(shapes[z_owner[l]] == shapes[z_owner[r]])) {
          throw SchedulingError(ParallelRules::kShapeEquality,
                                "synchronous Z rotations on the pair of " +
                                    gate_name(gates[i]) +
                                    " must share one shape");
        }
      }
      coeffs.c[l] = pi * reduce_swap_power(w->k);
      blocks.push_back({shapes[i], {}, {l}, false});
    }
  }

  for (int s = 0; s < n; ++s) {
    if (z_owner[s] != -1) {
      blocks.push_back({shapes[z_owner[s]], {s}, {}, false});
    }
  }
  cover_remaining(blocks, shapes[0], n);
  PulseSegment segment(std::move(coeffs), merge_blocks(std::move(blocks)),
                       duration, opts.allow_constant_shape);
  ensure_commuting(segment, ParallelRules::kSynchronous);
  return segment;
}

PulseSegment schedule_esr_driven(std::span<const GateSpec> gates,
                                 std::span<const ShapeFunction> shapes,
                                 double duration, int n,
                                 const SynthOptions& opts) {
  std::optional<SelectiveRotation> rotation;
  std::optional<std::size_t> rotation_index;
  std::vector<bool> resonant(n, false);

  for (std::size_t i = 0; i < gates.size(); ++i) {
    SelectiveRotation r;
    if (const auto* s = std::get_if<SelectiveRotation>(&gates[i])) {
      r = *s;
    } else if (const auto* g = std::get_if<GlobalRotation>(&gates[i])) {
      r.axis = {std::cos(g->phi), std::sin(g->phi), 0.0};
      r.theta = g->theta;
      for (int s = 0; s < n; ++s) r.resonant.push_back(s);
    } else {
      continue;
    }
    if (rotation) {
      const bool same_axis = std::abs(r.axis[0] - rotation->axis[0]) < 1e-12 &&
                             std::abs(r.axis[1] - rotation->axis[1]) < 1e-12 &&
                             std::abs(r.axis[2] - rotation->axis[2]) < 1e-12;
      if (!same_axis || std::abs(r.theta - rotation->theta) > 1e-12) {
        throw SchedulingError(ParallelRules::kSynchronous,
                              "ESR-driven rotations share beta and phi, so " +
                                  gate_name(gates[i]) +
                                  " must use the axis and angle of " +
                                  gate_name(gates[*rotation_index]));
      }
      if (!(shapes[i] == shapes[*rotation_index])) {
        throw SchedulingError(ParallelRules::kShapeEquality,
                              "all rotations need one shape (S_g = S_B)");
      }
    } else {
      rotation = r;
      rotation_index = i;
    }
    for (int s : r.resonant) {
      if (s < 0 || s >= n) {
        throw std::out_of_range("schedule_parallel: resonant site");
      }
      if (resonant[s]) {
        throw SchedulingError(
            ParallelRules::kSiteOverlap,
            "qubit " + std::to_string(s) + " is resonant in two rotations");
      }
      resonant[s] = true;
    }
  }

  const auto k = selective_rotation_coefficients(
      rotation->axis, rotation->theta, opts.minus_branch);
  PulseCoefficients coeffs = PulseCoefficients::zeros(n);
  for (int s = 0; s < n; ++s) coeffs.a[s] = resonant[s] ? k.a_plus : k.a_minus;
  coeffs.beta = k.beta;
  coeffs.phi = k.phi;

  const ShapeFunction& drive_shape = shapes[*rotation_index];
  std::vector<ShapeBlock> blocks;
  ShapeBlock drive{drive_shape, {}, {}, true};
  for (int s = 0; s < n; ++s) drive.sites.push_back(s);
  blocks.push_back(std::move(drive));

  for (std::size_t i = 0; i < gates.size(); ++i) {
    if (const auto* w = std::get_if<SwapPower>(&gates[i])) {
      if (resonant[w->site] != resonant[w->site + 1]) {
        throw SchedulingError(
            ParallelRules::kSwapUnrotated,
            gate_name(gates[i]) +
                " may only run on a pair that rotates synchronously (both "
                "resonant or both non-resonant)");
      }
      coeffs.c[w->site] = pi * reduce_swap_power(w->k);
      blocks.push_back({shapes[i], {}, {w->site}, false});
    }
  }
  cover_remaining(blocks, drive_shape, n);
  PulseSegment segment(std::move(coeffs), merge_blocks(std::move(blocks)),
                       duration, opts.allow_constant_shape);
  ensure_commuting(segment, ParallelRules::kSynchronous);
  return segment;
}

}  // namespace

PulseSegment schedule_parallel(std::span<const GateSpec> gates,
                               std::span<const ShapeFunction> shapes,
                               double duration, int n_qubits,
                               const SynthOptions& opts) {
  register_dim(n_qubits);
  if (gates.empty()) {
    throw ValidationError("schedule_parallel: no gates given");
  }
  if (shapes.size() != gates.size()) {
    throw ValidationError("schedule_parallel: need one shape per gate");
  }
  bool esr = false;
  bool voltage_only = false;
  for (const GateSpec& g : gates) {
    if (std::holds_alternative<Cnot>(g)) {
      throw SchedulingError(ParallelRules::kUnsupported,
                            "CNOT is a three-pulse sequence and cannot be "
                            "merged into one segment");
    }
    if (is_esr_gate(g)) esr = true;
    if (std::holds_alternative<ZRotation>(g) ||
        std::holds_alternative<ControlledPhase>(g)) {
      voltage_only = true;
    }
  }
  if (esr && voltage_only) {
    throw SchedulingError(
        ParallelRules::kGroupMixing,
        "voltage-only gates (Z rotations, CPHASE; beta = 0) cannot share a "
        "segment with ESR-driven rotations");
  }
  check_separated(gates, n_qubits);
  return esr ? schedule_esr_driven(gates, shapes, duration, n_qubits, opts)
             : schedule_voltage_only(gates, shapes, duration, n_qubits, opts);
}

std::vector<PulseSegment> synthesize(const GateSpec& gate,
                                     const ShapeFunction& shape,
                                     double duration, int n_qubits,
                                     const SynthOptions& opts) {
  return std::visit(
      Overloaded{
          [&](const ZRotation& g) {
            if (g.site < 0 || g.site >= n_qubits) {
              throw std::out_of_range("z rotation site out of range");
            }
            std::vector<double> angles(n_qubits, 0.0);
            angles[g.site] = g.theta;
            const std::array<ShapeFunction, 1> one{shape};
            return std::vector<PulseSegment>{
                synth_z_rotations(angles, one, duration, opts)};
          },
          [&](const SwapPower& g) {
            return std::vector<PulseSegment>{
                synth_swap_pow(g.site, g.k, shape, duration, n_qubits, opts)};
          },
          [&](const GlobalRotation& g) {
            return std::vector<PulseSegment>{synth_global_rotation(
                g.phi, g.theta, shape, duration, n_qubits, opts)};
          },
          [&](const SelectiveRotation& g) {
            return std::vector<PulseSegment>{synth_selective_rotation(
                g.axis, g.theta, g.resonant, shape, duration, n_qubits, opts)};
          },
          [&](const ControlledPhase& g) {
            return std::vector<PulseSegment>{
                synth_cphase(g.site, g.alpha, shape, duration, n_qubits, opts)};
          },
          [&](const Cnot& g) {
            const std::array<ShapeFunction, 3> shapes{shape, shape, shape};
            // Device parameters do not enter the segments themselves.
            const DeviceConfig placeholder(n_qubits, 1.0, 2.0);
            return synth_cnot(g.control, g.target,
                              std::span<const ShapeFunction, 3>(shapes),
                              duration, placeholder, opts)
                .segments;
          },
      },
      gate);
}

Operator rotation_matrix(const std::array<double, 3>& axis, double theta) {
  check_axis(axis);
  const double c = std::cos(0.5 * theta);
  const double s = std::sin(0.5 * theta);
  const Complex i(0.0, 1.0);
  Matrix m(2, 2);
  m(0, 0) = c - i * s * axis[2];
  m(1, 1) = c + i * s * axis[2];
  m(0, 1) = -i * s * Complex(axis[0], -axis[1]);
  m(1, 0) = -i * s * Complex(axis[0], axis[1]);
  return Operator(1, std::move(m));
}

Operator cnot_matrix(int control, int target, int n_qubits) {
  const auto d = register_dim(n_qubits);
  if (control == target || control < 0 || target < 0 || control >= n_qubits ||
      target >= n_qubits) {
    throw std::out_of_range("cnot_matrix: invalid sites");
  }
  const auto cb = bit_of(control, n_qubits);
  const auto tb = bit_of(target, n_qubits);
  Matrix m = Matrix::Zero(d, d);
  for (Eigen::Index col = 0; col < d; ++col) {
    m((col & cb) ? col ^ tb : col, col) = 1.0;
  }
  return Operator(n_qubits, std::move(m));
}

Operator cphase_matrix(int site, double alpha, int n_qubits) {
  const auto d = register_dim(n_qubits);
  check_pair(site, n_qubits, "cphase_matrix");
  const auto both = bit_of(site, n_qubits) | bit_of(site + 1, n_qubits);
  Matrix m = Matrix::Identity(d, d);
  for (Eigen::Index k = 0; k < d; ++k) {
    if ((k & both) == both) m(k, k) = std::polar(1.0, alpha);
  }
  return Operator(n_qubits, std::move(m));
}

Operator swap_pow_matrix(int site, double k, int n_qubits) {
  // SWAP^k = P_sym + e^{i pi k} P_anti.
  const Operator swap = swap_matrix(site, n_qubits);
  const Operator id = Operator::identity(n_qubits);
  const Operator sym = 0.5 * (id + swap);
  const Operator anti = 0.5 * (id - swap);
  return sym + std::polar(1.0, pi * k) * anti;
}

Operator cswap_matrix(int control, int a, int b, int n_qubits) {
  const auto d = register_dim(n_qubits);
  for (int s : {control, a, b}) {
    if (s < 0 || s >= n_qubits) throw std::out_of_range("cswap_matrix site");
  }
  if (control == a || control == b || a == b) {
    throw std::out_of_range("cswap_matrix: sites must differ");
  }
  const auto cb = bit_of(control, n_qubits);
  const auto ab = bit_of(a, n_qubits);
  const auto bb = bit_of(b, n_qubits);
  Matrix m = Matrix::Zero(d, d);
  for (Eigen::Index col = 0; col < d; ++col) {
    Eigen::Index row = col;
    if ((col & cb) && (((col & ab) != 0) != ((col & bb) != 0))) {
      row = col ^ ab ^ bb;
    }
    m(row, col) = 1.0;
  }
  return Operator(n_qubits, std::move(m));
}

Operator ideal_unitary(const GateSpec& gate, int n_qubits) {
  register_dim(n_qubits);
  return std::visit(Overloaded{
                        [&](const ZRotation& g) {
                          return embed_single(
                              rotation_matrix({0.0, 0.0, 1.0}, g.theta), g.site,
                              n_qubits);
                        },
                        [&](const SwapPower& g) {
                          return swap_pow_matrix(g.site, g.k, n_qubits);
                        },
                        [&](const GlobalRotation& g) {
                          const Operator r = rotation_matrix(
                              {std::cos(g.phi), std::sin(g.phi), 0.0}, g.theta);
                          Operator u = r;
                          for (int s = 1; s < n_qubits; ++s) u = kron(u, r);
                          return u;
                        },
                        [&](const SelectiveRotation& g) {
                          const Operator r = rotation_matrix(g.axis, g.theta);
                          Operator u = Operator::identity(n_qubits);
                          for (int s : g.resonant)
                            u = embed_single(r, s, n_qubits) * u;
                          return u;
                        },
                        [&](const ControlledPhase& g) {
                          return cphase_matrix(g.site, g.alpha, n_qubits);
                        },
                        [&](const Cnot& g) {
                          return cnot_matrix(g.control, g.target, n_qubits);
                        },
                    },
                    gate);
}

Operator named_target(const std::string& name, int n_qubits) {
  auto need = [&](int k) {
    if (n_qubits < k) {
      throw ValidationError("target `" + name + "` needs at least " +
                            std::to_string(k) + " qubits");
    }
  };
  if (name == "identity") return Operator::identity(n_qubits);
  if (name == "cnot") {
    need(2);
    return cnot_matrix(0, 1, n_qubits);
  }
  if (name == "cz") {
    need(2);
    return cphase_matrix(0, pi, n_qubits);
  }
  if (name == "swap") {
    need(2);
    return swap_matrix(0, n_qubits);
  }
  if (name == "cswap") {
    need(3);
    return cswap_matrix(0, 1, 2, n_qubits);
  }
  throw ValidationError("unknown target `" + name +
                        "` (expected cnot, cz, swap, cswap or identity)");
}

}  // namespace spinforge
