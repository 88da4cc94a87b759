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

#include "spinforge/hamiltonian.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "spinforge/errors.hpp"

namespace spinforge {
namespace {

using std::numbers::pi;

bool all_finite(std::span<const double> v) {
  for (double x : v) {
    if (!std::isfinite(x)) return false;
  }
  return true;
}

// Shape of the ESR term and the phase it should be driven at for this sign
// of S: a negative S is absorbed into a pi phase flip so B_rf stays >= 0.
double resolved_phase(double phi, double s) {
  return s < 0.0 ? wrap_phase(phi + pi) : wrap_phase(phi);
}

Operator z_term(double a, int site, int n) {
  return (0.5 * a) * pauli_embed(Pauli::kZ, site, n);
}

Operator esr_term(double beta, double phi, int site, int n) {
  return (0.5 * beta * std::cos(phi)) * pauli_embed(Pauli::kX, site, n) +
         (0.5 * beta * std::sin(phi)) * pauli_embed(Pauli::kY, site, n);
}

Operator exchange_part(double c, int coupling, int n) {
  return (0.25 * c) * exchange_term(coupling, n);
}

}  // namespace

double wrap_phase(double angle) {
  double r = std::remainder(angle, 2.0 * pi);  // [-pi, pi]
  if (r <= -pi) r += 2.0 * pi;
  return r;
}

DeviceConfig::DeviceConfig(int n_qubits, double b_z_tesla, double g_idle)
    : n_qubits_(n_qubits), b_z_(b_z_tesla), g_idle_(g_idle) {
  if (n_qubits < 1 || n_qubits > kMaxQubits) {
    throw ValidationError("device: n_qubits must be in [1, " +
                          std::to_string(kMaxQubits) + "]");
  }
  if (!(b_z_tesla > 0.0) || !std::isfinite(b_z_tesla)) {
    throw ValidationError("device: b_z must be positive");
  }
  if (!(g_idle > 0.0) || !std::isfinite(g_idle)) {
    throw ValidationError("device: g_idle must be positive");
  }
}

PulseCoefficients PulseCoefficients::zeros(int n_qubits) {
  register_dim(n_qubits);
  PulseCoefficients c;
  c.a.assign(n_qubits, 0.0);
  c.c.assign(n_qubits - 1, 0.0);
  return c;
}

void PulseCoefficients::validate(int n_qubits) const {
  if (static_cast<int>(a.size()) != n_qubits) {
    throw ValidationError("coefficients: expected " + std::to_string(n_qubits) +
                          " Z angles, got " + std::to_string(a.size()));
  }
  if (static_cast<int>(c.size()) != n_qubits - 1) {
    throw ValidationError("coefficients: expected " +
                          std::to_string(n_qubits - 1) +
                          " exchange angles, got " + std::to_string(c.size()));
  }
  if (!all_finite(a) || !all_finite(c) || !std::isfinite(beta) ||
      !std::isfinite(phi)) {
    throw ValidationError("coefficients: all entries must be finite");
  }
  if (beta < 0.0) {
    throw ValidationError("coefficients: beta must be non-negative");
  }
}

PulseSegment::PulseSegment(PulseCoefficients coeffs, ShapeFunction shape,
                           double duration, bool allow_constant_shape)
    : PulseSegment(std::move(coeffs), std::vector<ShapeBlock>{}, duration,
                   allow_constant_shape) {
  ShapeBlock all{std::move(shape), {}, {}, true};
  for (int j = 0; j < n_qubits(); ++j) all.sites.push_back(j);
  for (int j = 0; j + 1 < n_qubits(); ++j) all.couplings.push_back(j);
  blocks_.push_back(std::move(all));
  index_blocks();
}

PulseSegment::PulseSegment(PulseCoefficients coeffs,
                           std::vector<ShapeBlock> blocks, double duration,
                           bool allow_constant_shape)
    : coeffs_(std::move(coeffs)),
      blocks_(std::move(blocks)),
      duration_(duration),
      allow_constant_(allow_constant_shape) {
  register_dim(coeffs_.n_qubits());
  coeffs_.validate(coeffs_.n_qubits());
  if (!(duration > 0.0) || !std::isfinite(duration)) {
    throw ValidationError("segment duration must be positive");
  }
  if (!blocks_.empty()) index_blocks();
}

void PulseSegment::index_blocks() {
  const int n = n_qubits();
  site_block_.assign(n, -1);
  coupling_block_.assign(n - 1, -1);
  esr_block_ = -1;
  for (std::size_t b = 0; b < blocks_.size(); ++b) {
    const ShapeBlock& block = blocks_[b];
    if (!block.shape.is_physical() && !allow_constant_) {
      throw ValidationError(
          "constant shape violates S(0) = S(1) = 0; pass the "
          "allow-constant-shape override to use it");
    }
    for (int s : block.sites) {
      if (s < 0 || s >= n) throw std::out_of_range("shape block site");
      if (site_block_[s] != -1) {
        throw ValidationError("site " + std::to_string(s) +
                              " assigned to two shape blocks");
      }
      site_block_[s] = static_cast<int>(b);
    }
    for (int c : block.couplings) {
      if (c < 0 || c >= n - 1) throw std::out_of_range("shape block coupling");
      if (coupling_block_[c] != -1) {
        throw ValidationError("coupling " + std::to_string(c) +
                              " assigned to two shape blocks");
      }
      coupling_block_[c] = static_cast<int>(b);
    }
    if (block.esr) {
      if (esr_block_ != -1) {
        throw ValidationError("ESR drive assigned to two shape blocks");
      }
      esr_block_ = static_cast<int>(b);
    }
  }
  for (int s = 0; s < n; ++s) {
    if (site_block_[s] == -1) {
      throw ValidationError("site " + std::to_string(s) + " has no shape");
    }
  }
  for (int c = 0; c < n - 1; ++c) {
    if (coupling_block_[c] == -1) {
      throw ValidationError("coupling " + std::to_string(c) + " has no shape");
    }
  }
  if (esr_block_ == -1) throw ValidationError("ESR drive has no shape");
}

const ShapeFunction& PulseSegment::site_shape(int site) const {
  return blocks_.at(site_block_.at(site)).shape;
}

const ShapeFunction& PulseSegment::coupling_shape(int coupling) const {
  return blocks_.at(coupling_block_.at(coupling)).shape;
}

const ShapeFunction& PulseSegment::esr_shape() const {
  return blocks_.at(esr_block_).shape;
}

Operator build_h0(const PulseCoefficients& coeffs, int n_qubits) {
  coeffs.validate(n_qubits);
  Operator h = Operator::zero(n_qubits);
  for (int j = 0; j < n_qubits; ++j) {
    h = h + z_term(coeffs.a[j], j, n_qubits);
    if (coeffs.beta != 0.0) {
      h = h + esr_term(coeffs.beta, coeffs.phi, j, n_qubits);
    }
  }
  for (int j = 0; j + 1 < n_qubits; ++j) {
    if (coeffs.c[j] != 0.0) h = h + exchange_part(coeffs.c[j], j, n_qubits);
  }
  return h;
}

Operator build_h0(const PulseCoefficients& coeffs, const DeviceConfig& device) {
  return build_h0(coeffs, device.n_qubits());
}

Operator block_h0(const PulseSegment& segment, std::size_t block) {
  const ShapeBlock& b = segment.blocks().at(block);
  const PulseCoefficients& k = segment.coeffs();
  const int n = segment.n_qubits();
  Operator h = Operator::zero(n);
  for (int s : b.sites) h = h + z_term(k.a[s], s, n);
  for (int c : b.couplings) h = h + exchange_part(k.c[c], c, n);
  if (b.esr && k.beta != 0.0) {
    for (int s = 0; s < n; ++s) h = h + esr_term(k.beta, k.phi, s, n);
  }
  return h;
}

Operator scaled_hamiltonian(const PulseSegment& segment, double tau) {
  if (!(tau >= 0.0 && tau <= 1.0)) {
    throw std::domain_error("sample_hamiltonian: tau must lie in [0, 1]");
  }
  const PulseCoefficients& k = segment.coeffs();
  const int n = segment.n_qubits();
  Operator h = Operator::zero(n);
  for (const ShapeBlock& b : segment.blocks()) {
    const double s = b.shape(tau);
    if (s == 0.0) continue;
    for (int site : b.sites) h = h + z_term(s * k.a[site], site, n);
    for (int c : b.couplings) h = h + exchange_part(s * k.c[c], c, n);
    if (b.esr && k.beta != 0.0) {
      const double phase = resolved_phase(k.phi, s);
      for (int site = 0; site < n; ++site) {
        h = h + esr_term(std::abs(s) * k.beta, phase, site, n);
      }
    }
  }
  return h;
}

Operator sample_hamiltonian(const PulseSegment& segment, double tau,
                            const DeviceConfig& device) {
  if (device.n_qubits() != segment.n_qubits()) {
    throw ValidationError("segment and device register sizes differ");
  }
  return (1.0 / segment.duration()) * scaled_hamiltonian(segment, tau);
}

double verify_commuting(const PulseSegment& segment, int n_samples) {
  if (n_samples < 2) {
    throw ValidationError("verify_commuting needs at least two samples");
  }
  std::vector<Operator> samples;
  samples.reserve(n_samples);
  for (int i = 0; i < n_samples; ++i) {
    samples.push_back(scaled_hamiltonian(
        segment, static_cast<double>(i) / static_cast<double>(n_samples - 1)));
  }
  double worst = 0.0;
  for (int i = 0; i < n_samples; ++i) {
    for (int j = i + 1; j < n_samples; ++j) {
      worst = std::max(worst, commutator_norm(samples[i], samples[j]));
    }
  }
  return worst;
}

IdlingReport check_idling(std::span<const double> g_factors,
                          const DeviceConfig& device, double rel_tolerance) {
  if (static_cast<int>(g_factors.size()) != device.n_qubits()) {
    throw ValidationError("check_idling: expected one g-factor per qubit");
  }
  IdlingReport report;
  for (double g : g_factors) {
    const double r = std::abs(g - device.g_idle());
    report.residuals.push_back(r);
    report.max_residual = std::max(report.max_residual, r);
  }
  report.pass = report.max_residual < rel_tolerance * device.g_idle();
  return report;
}

PhysicalControls coefficients_to_physical(const PulseSegment& segment,
                                          const DeviceConfig& device,
                                          double tau) {
  if (device.n_qubits() != segment.n_qubits()) {
    throw ValidationError("segment and device register sizes differ");
  }
  const PulseCoefficients& k = segment.coeffs();
  const double t = segment.duration();
  const int n = segment.n_qubits();
  PhysicalControls out;
  out.omega_rf = device.omega_rf_idle();
  out.g.resize(n);
  for (int j = 0; j < n; ++j) {
    const double detuning = k.a[j] * segment.site_shape(j)(tau) / t;
    out.g[j] = device.g_idle() + detuning / device.larmor_per_g();
  }
  out.exchange_j.resize(n - 1);
  for (int j = 0; j + 1 < n; ++j) {
    out.exchange_j[j] = kHbar * k.c[j] * segment.coupling_shape(j)(tau) / t;
  }
  const double s_esr = segment.esr_shape()(tau);
  out.b_rf = k.beta * std::abs(s_esr) * kHbar / (kBohrMagneton * t);
  out.phi = resolved_phase(k.phi, s_esr);
  return out;
}

PulseCoefficients physical_to_coefficients(const PhysicalControls& controls,
                                           const PulseSegment& segment,
                                           const DeviceConfig& device,
                                           double tau) {
  const int n = segment.n_qubits();
  if (static_cast<int>(controls.g.size()) != n ||
      static_cast<int>(controls.exchange_j.size()) != n - 1) {
    throw ValidationError("physical controls do not match the segment size");
  }
  auto shape_at = [tau](const ShapeFunction& s) {
    const double v = s(tau);
    if (v == 0.0) {
      throw std::domain_error("cannot invert controls where S(tau) = 0");
    }
    return v;
  };
  const double t = segment.duration();
  PulseCoefficients k = PulseCoefficients::zeros(n);
  for (int j = 0; j < n; ++j) {
    const double detuning =
        device.larmor_per_g() * controls.g[j] - controls.omega_rf;
    k.a[j] = detuning * t / shape_at(segment.site_shape(j));
  }
  for (int j = 0; j + 1 < n; ++j) {
    k.c[j] = controls.exchange_j[j] * t /
             (kHbar * shape_at(segment.coupling_shape(j)));
  }
  const double s_esr = shape_at(segment.esr_shape());
  k.beta = kBohrMagneton * controls.b_rf * t / (kHbar * std::abs(s_esr));
  k.phi = resolved_phase(controls.phi, s_esr);
  return k;
}

}  // namespace spinforge
