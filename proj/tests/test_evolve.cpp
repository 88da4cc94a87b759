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
#include "spinforge/evolve.hpp"
#include "test_support.hpp"

using namespace spinforge;
using namespace spinforge::testing;
using std::numbers::pi;

namespace {

PulseCoefficients coeffs3() {
  PulseCoefficients k;
  k.a = {1.1, -0.7, 2.3};
  k.beta = 1.9;
  k.c = {0.8, 1.4};
  k.phi = -0.4;
  return k;
}

PulseSegment non_commuting_segment() {
  std::vector<ShapeBlock> blocks{
      {shifted_gaussian(0.1), {0, 1, 2}, {0, 1}, false},
      {shifted_gaussian(0.3), {}, {}, true}};
  return PulseSegment(coeffs3(), blocks, 1e-6);
}

}  // namespace

TEST_CASE("exact propagator of a single-shape segment is exp(-i H0)") {
  const PulseSegment seg(coeffs3(), shifted_gaussian(0.2), 1e-6);
  const Matrix oracle = expm_oracle(build_h0(coeffs3(), 3).matrix());
  CHECK(max_diff(exact_unitary(seg).matrix(), oracle) < 1e-12);
}

TEST_CASE("exact propagator refuses non-commuting segments") {
  CHECK_THROWS_AS(exact_unitary(non_commuting_segment()), CommutationError);
}

TEST_CASE("Trotter product converges to the exact propagator") {
  const PulseSegment seg(coeffs3(), shifted_gaussian(0.15), 1e-6);
  const Operator exact = exact_unitary(seg);
  const double e1 =
      max_diff(trotter_unitary(seg, 500).matrix(), exact.matrix());
  const double e2 =
      max_diff(trotter_unitary(seg, 1000).matrix(), exact.matrix());
  const double e4 =
      max_diff(trotter_unitary(seg, 2000).matrix(), exact.matrix());
  CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.05));
  CHECK(e2 / e4 == doctest::Approx(4.0).epsilon(0.05));
  CHECK(gate_fidelity(trotter_unitary(seg, 4000), exact).fidelity > 1.0 - 1e-9);
  CHECK_THROWS_AS(trotter_unitary(seg, 0), ValidationError);
}

TEST_CASE("Trotter product is second order on a non-commuting segment") {
  const PulseSegment seg = non_commuting_segment();
  const Matrix reference = trotter_unitary(seg, 12800).matrix();
  std::vector<double> err;
  for (int n : {100, 200, 400, 800}) {
    err.push_back(max_diff(trotter_unitary(seg, n).matrix(), reference));
  }
  for (std::size_t i = 0; i + 1 < err.size(); ++i) {
    CHECK(std::log2(err[i] / err[i + 1]) == doctest::Approx(2.0).epsilon(0.05));
  }
}

TEST_CASE("sequence_unitary multiplies later segments on the left") {
  const PulseSegment a(coeffs3(), shifted_gaussian(0.2), 1e-6);
  PulseCoefficients kb = coeffs3();
  kb.phi = 1.0;
  kb.a = {0.0, 0.5, 0.0};
  const PulseSegment b(kb, shifted_gaussian(0.2), 1e-6);
  const std::vector<PulseSegment> segs{a, b};
  const Matrix expected = exact_unitary(b).matrix() * exact_unitary(a).matrix();
  CHECK(max_diff(sequence_unitary(segs).matrix(), expected) < 1e-14);
  CHECK_THROWS_AS(sequence_unitary(std::span<const PulseSegment>{}),
                  ValidationError);
}

TEST_CASE("gate fidelity ignores a global phase") {
  const Operator u = named_target("cnot", 2);
  const Operator v = std::exp(Complex(0.0, 0.9)) * u;
  const FidelityReport r = gate_fidelity(v, u, "cnot");
  CHECK(r.fidelity == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(r.global_phase == doctest::Approx(0.9));
  CHECK(r.max_elementwise_error < 1e-15);
  CHECK(r.target_name == "cnot");
  CHECK(gate_fidelity(named_target("swap", 2), u).fidelity < 0.9);
  CHECK_THROWS_AS(gate_fidelity(u, named_target("cswap", 3)), DimensionError);
  CHECK_THROWS_AS(gate_fidelity(2.0 * u, u), ValidationError);
}

TEST_CASE("rotating-frame audit of one-microsecond segments") {
  const DeviceConfig device(2, 1.0, 2.0);
  const Schedule s = synth_cnot(0, 1, {0.1, 0.15, 0.3}, 1e-6, device);
  const RotatingFrameReport r = rotating_frame_check(s);
  CHECK_FALSE(r.pass);
  REQUIRE(r.segment_cycles.size() == 3);
  CHECK(r.segment_cycles[0] ==
        doctest::Approx(27992.48987214541).epsilon(1e-12));
  CHECK(r.segment_deficits[0] == doctest::Approx(0.48987).epsilon(2e-5));
  CHECK_FALSE(r.warning.empty());

  const double t = integer_cycle_duration(1e-6, device.omega_rf_idle());
  const Schedule fixed = synth_cnot(0, 1, {0.1, 0.15, 0.3}, t, device);
  CHECK(rotating_frame_check(fixed).pass);
  CHECK(rotating_frame_check(fixed).warning.empty());
}
