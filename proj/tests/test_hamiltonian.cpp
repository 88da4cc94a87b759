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

#include <doctest.h>

#include <cmath>
#include <numbers>

#include "spinforge/errors.hpp"
#include "spinforge/hamiltonian.hpp"
#include "test_support.hpp"

using namespace spinforge;
using namespace spinforge::testing;
using std::numbers::pi;

namespace {

PulseCoefficients sample_coeffs() {
  PulseCoefficients k;
  k.a = {0.3, -1.2, 2.0};
  k.beta = 1.7;
  k.c = {0.9, -0.4};
  k.phi = 0.6;
  return k;
}

}  // namespace

TEST_CASE("device carrier frequency matches the CODATA constants") {
  const DeviceConfig device(2, 1.0, 2.0);
  // mu_B B g / (2 pi hbar) = 27.99248987 GHz for B = 1 T, g = 2.
  CHECK(device.omega_rf_idle() / (2 * pi) ==
        doctest::Approx(27.99248987e9).epsilon(1.5e-10));
  CHECK_THROWS_AS(DeviceConfig(0, 1.0, 2.0), ValidationError);
  CHECK_THROWS_AS(DeviceConfig(2, -1.0, 2.0), ValidationError);
  CHECK_THROWS_AS(DeviceConfig(2, 1.0, 0.0), ValidationError);
}

TEST_CASE("build_h0 matches the explicit operator sum") {
  const PulseCoefficients k = sample_coeffs();
  const int n = 3;
  Matrix oracle = Matrix::Zero(8, 8);
  for (int j = 0; j < n; ++j) {
    oracle += 0.5 * (k.a[j] * pauli_oracle('z', j, n) +
                     k.beta * (std::cos(k.phi) * pauli_oracle('x', j, n) +
                               std::sin(k.phi) * pauli_oracle('y', j, n)));
  }
  for (int j = 0; j + 1 < n; ++j) {
    for (char ax : {'x', 'y', 'z'}) {
      oracle +=
          k.c[j] / 4.0 * pauli_oracle(ax, j, n) * pauli_oracle(ax, j + 1, n);
    }
  }
  const Operator h0 = build_h0(k, n);
  CHECK(h0.is_hermitian());
  CHECK(max_diff(h0.matrix(), oracle) < 1e-15);
  CHECK(max_diff(build_h0(k, DeviceConfig(3, 1.0, 2.0)).matrix(), oracle) <
        1e-15);
}

TEST_CASE("coefficient validation") {
  PulseCoefficients k = sample_coeffs();
  CHECK_NOTHROW(k.validate(3));
  CHECK_THROWS_AS(k.validate(2), ValidationError);
  k.beta = -0.1;
  CHECK_THROWS_AS(k.validate(3), ValidationError);
  k = sample_coeffs();
  k.a[1] = std::nan("");
  CHECK_THROWS_AS(k.validate(3), ValidationError);
  k = sample_coeffs();
  k.c.pop_back();
  CHECK_THROWS_AS(k.validate(3), ValidationError);
}

TEST_CASE("segment validation") {
  const ShapeFunction g = shifted_gaussian(0.2);
  CHECK_THROWS_AS(PulseSegment(sample_coeffs(), g, 0.0), ValidationError);
  CHECK_THROWS_AS(
      PulseSegment(sample_coeffs(), ShapeFunction::constant(), 1e-6),
      ValidationError);
  CHECK_NOTHROW(
      PulseSegment(sample_coeffs(), ShapeFunction::constant(), 1e-6, true));

  // Blocks must partition the terms exactly once.
  std::vector<ShapeBlock> missing{{g, {0, 1}, {0, 1}, true}};
  CHECK_THROWS_AS(PulseSegment(sample_coeffs(), missing, 1e-6),
                  ValidationError);
  std::vector<ShapeBlock> doubled{{g, {0, 1, 2}, {0, 1}, true},
                                  {g, {2}, {}, false}};
  CHECK_THROWS_AS(PulseSegment(sample_coeffs(), doubled, 1e-6),
                  ValidationError);
  std::vector<ShapeBlock> split{{g, {0, 1}, {0, 1}, true},
                                {shifted_gaussian(0.1), {2}, {}, false}};
  const PulseSegment seg(sample_coeffs(), split, 1e-6);
  CHECK(seg.site_shape(2) == shifted_gaussian(0.1));
  CHECK(seg.esr_shape() == g);
  CHECK_THROWS_AS(seg.site_shape(3), std::out_of_range);
}

TEST_CASE("scaled Hamiltonian is S(tau) H0 for a single shape") {
  const ShapeFunction s = shifted_gaussian(0.15);
  const PulseSegment seg(sample_coeffs(), s, 2e-6);
  const Operator h0 = build_h0(sample_coeffs(), 3);
  for (double tau : {0.0, 0.2, 0.5, 0.81}) {
    CHECK(max_diff(scaled_hamiltonian(seg, tau).matrix(),
                   s(tau) * h0.matrix()) < 1e-13);
  }
  const DeviceConfig device(3, 1.0, 2.0);
  CHECK(max_diff(sample_hamiltonian(seg, 0.4, device).matrix() * 2e-6,
                 s(0.4) * h0.matrix()) < 1e-13);
  CHECK(verify_commuting(seg) < 1e-12);
}

TEST_CASE("negative shape values flip the drive phase") {
  std::vector<double> raw(201);
  for (int i = 0; i < 201; ++i) {
    const double x = i / 200.0;
    raw[i] = std::sin(2 * pi * x) + 0.5 * std::sin(pi * x);
  }
  raw.back() = 0.0;
  const ShapeFunction s = normalize(raw);
  REQUIRE(s.changes_sign());
  const PulseSegment seg(sample_coeffs(), s, 1e-6);
  const double tau = 0.8;
  REQUIRE(s(tau) < 0.0);
  const Operator h0 = build_h0(sample_coeffs(), 3);
  CHECK(max_diff(scaled_hamiltonian(seg, tau).matrix(), s(tau) * h0.matrix()) <
        1e-12);
  const DeviceConfig device(3, 1.0, 2.0);
  const PhysicalControls c = coefficients_to_physical(seg, device, tau);
  CHECK(c.b_rf > 0.0);
  CHECK(c.phi == doctest::Approx(wrap_phase(0.6 + pi)));
}

TEST_CASE("shape blocks with different profiles do not commute") {
  const PulseCoefficients k = sample_coeffs();
  std::vector<ShapeBlock> blocks{
      {shifted_gaussian(0.1), {0, 1, 2}, {0, 1}, false},
      {shifted_gaussian(0.3), {}, {}, true}};
  const PulseSegment seg(k, blocks, 1e-6);
  CHECK(verify_commuting(seg) > 1e-3);
}

TEST_CASE("physical controls round trip and idle at the boundaries") {
  const DeviceConfig device(3, 1.0, 2.0);
  const PulseSegment seg(sample_coeffs(), shifted_gaussian(0.2), 1e-6);
  for (double tau : {0.0, 1.0}) {
    const PhysicalControls c = coefficients_to_physical(seg, device, tau);
    CHECK(check_idling(c.g, device).pass);
    for (double j : c.exchange_j) CHECK(j == 0.0);
    CHECK(c.b_rf == 0.0);
  }
  const double tau = 0.37;
  const PhysicalControls c = coefficients_to_physical(seg, device, tau);
  CHECK(c.omega_rf == device.omega_rf_idle());
  CHECK_FALSE(check_idling(c.g, device).pass);
  const PulseCoefficients back = physical_to_coefficients(c, seg, device, tau);
  const PulseCoefficients k = sample_coeffs();
  for (int j = 0; j < 3; ++j) {
    CHECK(back.a[j] == doctest::Approx(k.a[j]).epsilon(1e-6));
  }
  for (int j = 0; j < 2; ++j) {
    CHECK(back.c[j] == doctest::Approx(k.c[j]).epsilon(1e-12));
  }
  CHECK(back.beta == doctest::Approx(k.beta).epsilon(1e-12));
  CHECK(back.phi == doctest::Approx(k.phi).epsilon(1e-12));
  CHECK_THROWS_AS(physical_to_coefficients(c, seg, device, 0.0),
                  std::domain_error);
}

TEST_CASE("idling report") {
  const DeviceConfig device(2, 1.0, 2.0);
  const std::vector<double> g{2.0, 2.0 + 1e-6};
  const IdlingReport r = check_idling(g, device);
  CHECK_FALSE(r.pass);
  CHECK(r.max_residual == doctest::Approx(1e-6));
  CHECK_THROWS_AS(check_idling(std::vector<double>{2.0}, device),
                  ValidationError);
}

TEST_CASE("wrap_phase maps into (-pi, pi]") {
  CHECK(wrap_phase(pi) == doctest::Approx(pi));
  CHECK(wrap_phase(-pi) == doctest::Approx(pi));
  CHECK(wrap_phase(3 * pi / 2) == doctest::Approx(-pi / 2));
  CHECK(wrap_phase(0.25) == 0.25);
}
