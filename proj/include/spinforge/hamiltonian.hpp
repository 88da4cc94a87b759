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

// Rotating-frame Hamiltonian of an exchange-coupled spin chain under a global
// ESR field:
//
//   H(t) = S(t)/T * H0,
//   H0 = 1/2 sum_j [A_j Z_j + beta (cos(phi) X_j + sin(phi) Y_j)]
//        + sum_j (C_j / 4) sigma_j . sigma_{j+1}
//
// The coefficients are integrated angles (rad), so exp(-i H0) is the
// segment propagator whenever the shape has unit mean.

#include <numbers>
#include <span>
#include <vector>

#include "spinforge/shapes.hpp"
#include "spinforge/spinops.hpp"

namespace spinforge {

// CODATA 2018. hbar is derived from the exact SI Planck constant rather than
// its rounded published value, which shifts the carrier in the 8th digit.
inline constexpr double kBohrMagneton = 9.2740100783e-24;  // J/T
inline constexpr double kPlanck = 6.62607015e-34;          // J s, exact
inline constexpr double kHbar = kPlanck / (2.0 * std::numbers::pi);

class DeviceConfig {
 public:
  DeviceConfig(int n_qubits, double b_z_tesla, double g_idle);

  int n_qubits() const noexcept { return n_qubits_; }
  double b_z() const noexcept { return b_z_; }
  double g_idle() const noexcept { return g_idle_; }

  // mu_B B_z / hbar: Larmor angular frequency per unit g-factor.
  double larmor_per_g() const noexcept { return kBohrMagneton * b_z_ / kHbar; }
  // mu_B B_z g_idle / hbar, the carrier frequency of the rotating frame.
  double omega_rf_idle() const noexcept { return larmor_per_g() * g_idle_; }

  friend bool operator==(const DeviceConfig&, const DeviceConfig&) = default;

 private:
  int n_qubits_;
  double b_z_;
  double g_idle_;
};

struct PulseCoefficients {
  std::vector<double> a;  // per-qubit Z angles A_j
  double beta = 0.0;      // ESR angle, >= 0
  std::vector<double> c;  // exchange angles C_j on coupling (j, j+1)
  double phi = 0.0;       // ESR phase where S > 0

  static PulseCoefficients zeros(int n_qubits);

  int n_qubits() const noexcept { return static_cast<int>(a.size()); }
  // Throws ValidationError on length mismatch, beta < 0 or non-finite values.
  void validate(int n_qubits) const;

  friend bool operator==(const PulseCoefficients&,
                         const PulseCoefficients&) = default;
};

// Assigns a subset of the H0 terms to one shape. Blocks of a segment
// partition the terms: every site's Z term, every coupling and the ESR drive
// belong to exactly one block.
struct ShapeBlock {
  ShapeFunction shape;
  std::vector<int> sites;
  std::vector<int> couplings;
  bool esr = false;
};

class PulseSegment {
 public:
  // One shape for every term.
  PulseSegment(PulseCoefficients coeffs, ShapeFunction shape, double duration,
               bool allow_constant_shape = false);
  PulseSegment(PulseCoefficients coeffs, std::vector<ShapeBlock> blocks,
               double duration, bool allow_constant_shape = false);

  const PulseCoefficients& coeffs() const noexcept { return coeffs_; }
  const std::vector<ShapeBlock>& blocks() const noexcept { return blocks_; }
  double duration() const noexcept { return duration_; }
  int n_qubits() const noexcept { return coeffs_.n_qubits(); }
  bool allows_constant_shape() const noexcept { return allow_constant_; }

  const ShapeFunction& site_shape(int site) const;
  const ShapeFunction& coupling_shape(int coupling) const;
  const ShapeFunction& esr_shape() const;

 private:
  void index_blocks();

  PulseCoefficients coeffs_;
  std::vector<ShapeBlock> blocks_;
  double duration_;
  bool allow_constant_;
  std::vector<int> site_block_;
  std::vector<int> coupling_block_;
  int esr_block_ = 0;
};

Operator build_h0(const PulseCoefficients& coeffs, const DeviceConfig& device);
Operator build_h0(const PulseCoefficients& coeffs, int n_qubits);

// The part of H0 carried by one block of the segment.
Operator block_h0(const PulseSegment& segment, std::size_t block);

// T * H(tau): the dimensionless generator sum_b S_b(tau) H0_b, with the ESR
// term of a negative-S block written as |S| beta at phase phi + pi.
Operator scaled_hamiltonian(const PulseSegment& segment, double tau);

// H(tau) in rad/s.
Operator sample_hamiltonian(const PulseSegment& segment, double tau,
                            const DeviceConfig& device);

// Largest max|[T H(tau_a), T H(tau_b)]| over n_samples uniform tau points.
// Reported in rad^2 so it compares directly against ||H0||^2.
double verify_commuting(const PulseSegment& segment, int n_samples = 17);

struct IdlingReport {
  bool pass = false;
  std::vector<double> residuals;  // |g_i - g_idle|
  double max_residual = 0.0;
};

IdlingReport check_idling(std::span<const double> g_factors,
                          const DeviceConfig& device,
                          double rel_tolerance = 1e-9);

struct PhysicalControls {
  std::vector<double> g;           // per-qubit g-factor
  std::vector<double> exchange_j;  // J_{j,j+1} in joules
  double b_rf = 0.0;               // ESR envelope, tesla, >= 0
  double omega_rf = 0.0;           // rad/s, held at the idle value
  double phi = 0.0;                // rad, in (-pi, pi]
};

PhysicalControls coefficients_to_physical(const PulseSegment& segment,
                                          const DeviceConfig& device,
                                          double tau);

// Inverse of coefficients_to_physical at a point where every block's shape is
// nonzero. Throws std::domain_error where a needed S(tau) vanishes.
PulseCoefficients physical_to_coefficients(const PhysicalControls& controls,
                                           const PulseSegment& segment,
                                           const DeviceConfig& device,
                                           double tau);

// Wraps an angle into (-pi, pi].
double wrap_phase(double angle);

}  // namespace spinforge
