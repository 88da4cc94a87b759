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
#include <random>

#include "spinforge/errors.hpp"
#include "spinforge/evolve.hpp"
#include "spinforge/synthesis.hpp"
#include "test_support.hpp"

using namespace spinforge;
using namespace spinforge::testing;
using std::numbers::pi;

namespace {

const ShapeFunction& gauss() {
  static const ShapeFunction s = shifted_gaussian(0.15);
  return s;
}

Matrix propagate(const std::vector<PulseSegment>& segs) {
  return sequence_unitary(segs).matrix();
}

Matrix propagate(const PulseSegment& seg) {
  return exact_unitary(seg).matrix();
}

Matrix swap_oracle(int site, int n) {
  Matrix ex = Matrix::Zero(4, 4);
  for (char ax : {'x', 'y', 'z'}) ex += kron_oracle(pauli2(ax), pauli2(ax));
  const Matrix swap4 = (Matrix::Identity(4, 4) + ex) / 2.0;
  return embed_pair_oracle(swap4, site, n);
}

Matrix swap_pow_oracle(int site, double k, int n) {
  const Matrix s = swap_oracle(site, n);
  const Matrix id = Matrix::Identity(s.rows(), s.cols());
  return (id + s) / 2.0 + std::exp(Complex(0.0, pi * k)) * (id - s) / 2.0;
}

Matrix cphase_oracle(int site, double alpha, int n) {
  Matrix d = Matrix::Identity(4, 4);
  d(3, 3) = std::exp(Complex(0.0, alpha));
  return embed_pair_oracle(d, site, n);
}

Matrix cnot_oracle() {
  Matrix m = Matrix::Zero(4, 4);
  m(0, 0) = m(1, 1) = m(2, 3) = m(3, 2) = 1.0;
  return m;
}

}  // namespace

TEST_CASE("reduce_angle maps into (-2 pi, 2 pi]") {
  CHECK(reduce_angle(2 * pi) == doctest::Approx(2 * pi));
  CHECK(reduce_angle(-2 * pi) == doctest::Approx(2 * pi));
  CHECK(reduce_angle(5 * pi) == doctest::Approx(pi));
  CHECK(reduce_angle(-0.5) == -0.5);
}

TEST_CASE("Z rotations on every qubit in one segment") {
  const std::vector<double> angles{0.4, -2.1, 7.5};
  const std::vector<ShapeFunction> shapes{gauss()};
  const PulseSegment seg = synth_z_rotations(angles, shapes, 1e-6);
  Matrix oracle = Matrix::Identity(1, 1);
  for (double a : angles)
    oracle = kron_oracle(oracle, rotation_oracle(0, 0, 1, a));
  CHECK(phase_distance(propagate(seg), oracle) < 1e-12);
  CHECK(seg.coeffs().beta == 0.0);

  // Different shapes per qubit still commute (all terms are Z).
  const std::vector<ShapeFunction> mixed{shifted_gaussian(0.1), gauss(),
                                         shifted_gaussian(0.3)};
  const PulseSegment seg2 = synth_z_rotations(angles, mixed, 1e-6);
  CHECK(seg2.blocks().size() == 3);
  CHECK(phase_distance(propagate(seg2), oracle) < 1e-12);
}

TEST_CASE("SWAP powers") {
  for (double k : {1.0, 0.5, -0.5, 0.25, 1.75, 3.0}) {
    const PulseSegment seg = synth_swap_pow(1, k, gauss(), 1e-6, 3);
    CHECK(phase_distance(propagate(seg), swap_pow_oracle(1, k, 3)) < 1e-12);
    CHECK(phase_distance(swap_pow_matrix(1, k, 3).matrix(),
                         swap_pow_oracle(1, k, 3)) < 1e-14);
  }
  CHECK_THROWS_AS(synth_swap_pow(2, 1.0, gauss(), 1e-6, 3), std::out_of_range);
}

TEST_CASE("global rotations") {
  for (double theta : {pi / 2, -pi / 3, 3 * pi}) {
    const double phi = 0.7;
    const PulseSegment seg =
        synth_global_rotation(phi, theta, gauss(), 1e-6, 2);
    const Matrix r = rotation_oracle(std::cos(phi), std::sin(phi), 0, theta);
    CHECK(phase_distance(propagate(seg), kron_oracle(r, r)) < 1e-12);
    CHECK(seg.coeffs().beta >= 0.0);
  }
}

TEST_CASE("selective rotation coefficients") {
  const double s = 1.0 / std::sqrt(2.0);
  const auto k =
      selective_rotation_coefficients({s, 0.0, s}, pi, MinusBranch::kPlus);
  CHECK(k.a_plus == doctest::Approx(pi * s));
  CHECK(k.beta == doctest::Approx(pi * s));
  CHECK(k.a_minus == doctest::Approx(std::sqrt(4 * pi * pi - pi * pi / 2)));
  CHECK(k.phi == doctest::Approx(0.0));
  const auto m =
      selective_rotation_coefficients({s, 0.0, s}, pi, MinusBranch::kMinus);
  CHECK(m.a_minus == doctest::Approx(-k.a_minus));
  CHECK_THROWS_AS(
      selective_rotation_coefficients({1.0, 1.0, 0.0}, pi, MinusBranch::kPlus),
      ValidationError);
}

TEST_CASE("selective rotations act only on resonant qubits") {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> uni(-2 * pi, 2 * pi);
  for (int trial = 0; trial < 20; ++trial) {
    double nx = normal(rng), ny = normal(rng), nz = normal(rng);
    const double norm = std::sqrt(nx * nx + ny * ny + nz * nz);
    nx /= norm, ny /= norm, nz /= norm;
    const double theta = uni(rng);
    const std::vector<int> resonant{trial % 3, (trial + 1) % 3};
    for (MinusBranch branch : {MinusBranch::kPlus, MinusBranch::kMinus}) {
      SynthOptions opts;
      opts.minus_branch = branch;
      const PulseSegment seg = synth_selective_rotation(
          {nx, ny, nz}, theta, resonant, gauss(), 1e-6, 3, opts);
      Matrix oracle = Matrix::Identity(1, 1);
      for (int q = 0; q < 3; ++q) {
        const bool on = q == resonant[0] || q == resonant[1];
        oracle = kron_oracle(oracle, on ? rotation_oracle(nx, ny, nz, theta)
                                        : Matrix::Identity(2, 2));
      }
      CHECK(phase_distance(propagate(seg), oracle) < 1e-10);
    }
  }
}

TEST_CASE("selective rotation feasibility boundary") {
  const std::vector<int> res{0};
  // Transverse component 1: feasible up to |theta| = 2 pi.
  CHECK_NOTHROW(
      synth_selective_rotation({1, 0, 0}, 2 * pi, res, gauss(), 1e-6, 2));
  CHECK_THROWS_AS(
      synth_selective_rotation({1, 0, 0}, 2 * pi + 1e-9, res, gauss(), 1e-6, 2),
      InfeasibleRotationError);
  // A pure Z axis is always feasible.
  CHECK_NOTHROW(
      synth_selective_rotation({0, 0, 1}, 3 * pi, res, gauss(), 1e-6, 2));
}

TEST_CASE("CPHASE closed form") {
  for (int i = 0; i < 16; ++i) {
    const double alpha = 2 * pi * i / 16;
    const PulseSegment seg = synth_cphase(0, alpha, gauss(), 1e-6, 2);
    CHECK(phase_distance(propagate(seg), cphase_oracle(0, alpha, 2)) < 1e-10);
  }
  const auto below = cphase_coefficients(std::nextafter(pi, 0.0));
  const auto above = cphase_coefficients(std::nextafter(pi, 4.0));
  CHECK(std::abs(below.a1 - above.a1) < 1e-12);
  CHECK(std::abs(below.a2 - above.a2) < 1e-12);
  CHECK(std::abs(below.c - above.c) < 1e-12);
  // Negative and large angles are reduced first.
  const PulseSegment neg = synth_cphase(1, -pi / 3, gauss(), 1e-6, 3);
  CHECK(phase_distance(propagate(neg), cphase_oracle(1, -pi / 3, 3)) < 1e-10);
}

TEST_CASE("CNOT from three pulses") {
  const DeviceConfig device(2, 1.0, 2.0);
  const Schedule s = synth_cnot(0, 1, {0.1, 0.15, 0.3}, 1e-6, device);
  REQUIRE(s.segments.size() == 3);
  CHECK(phase_distance(propagate(s.segments), cnot_oracle()) < 1e-12);
  const Schedule r = synth_cnot(1, 0, {0.1, 0.15, 0.3}, 1e-6, device);
  Matrix flipped = Matrix::Zero(4, 4);
  flipped(0, 0) = flipped(2, 2) = flipped(1, 3) = flipped(3, 1) = 1.0;
  CHECK(phase_distance(propagate(r.segments), flipped) < 1e-12);
  CHECK_THROWS_AS(
      synth_cnot(0, 2, {0.1, 0.1, 0.1}, 1e-6, DeviceConfig(3, 1, 2)),
      SchedulingError);
}

TEST_CASE("constant shape requires an explicit override") {
  const ShapeFunction c = ShapeFunction::constant();
  CHECK_THROWS_AS(synth_swap_pow(0, 1.0, c, 1e-6, 2), ValidationError);
  SynthOptions opts;
  opts.allow_constant_shape = true;
  const PulseSegment seg = synth_swap_pow(0, 1.0, c, 1e-6, 2, opts);
  CHECK(phase_distance(propagate(seg), swap_oracle(0, 2)) < 1e-12);
}

TEST_CASE("ideal unitaries and named targets") {
  CHECK(phase_distance(cnot_matrix(0, 1, 2).matrix(), cnot_oracle()) == 0.0);
  CHECK(phase_distance(named_target("cz", 2).matrix(),
                       cphase_oracle(0, pi, 2)) < 1e-15);
  CHECK(phase_distance(named_target("swap", 2).matrix(), swap_oracle(0, 2)) <
        1e-15);
  const Operator f = named_target("cswap", 3);
  // Control on site 0 swaps sites 1 and 2: |101> <-> |110>.
  CHECK(std::abs(f(6, 5)) == 1.0);
  CHECK(std::abs(f(3, 3)) == 1.0);
  CHECK(named_target("identity", 4).is_unitary());
  CHECK_THROWS_AS(named_target("toffoli", 3), ValidationError);
  CHECK_THROWS_AS(named_target("cswap", 2), ValidationError);
  CHECK(phase_distance(cswap_matrix(1, 0, 2, 3).matrix(),
                       cswap_matrix(1, 2, 0, 3).matrix()) == 0.0);
}

TEST_CASE("synthesize dispatches every gate kind") {
  const int n = 3;
  const std::vector<GateSpec> gates{
      ZRotation{1, 0.8},           SwapPower{0, 0.5},
      GlobalRotation{0.2, pi / 2}, SelectiveRotation{{0, 1, 0}, pi, {2}},
      ControlledPhase{1, 1.1},     Cnot{1, 2}};
  for (const GateSpec& g : gates) {
    const auto segs = synthesize(g, gauss(), 1e-6, n);
    CHECK(phase_distance(propagate(segs), ideal_unitary(g, n).matrix()) <
          1e-10);
    CHECK_FALSE(gate_name(g).empty());
  }
}

TEST_CASE("parallel voltage-only group") {
  const int n = 4;
  const std::vector<GateSpec> gates{ZRotation{0, 0.3}, ControlledPhase{2, 0.9}};
  const std::vector<ShapeFunction> shapes{shifted_gaussian(0.1), gauss()};
  const PulseSegment seg = schedule_parallel(gates, shapes, 1e-6, n);
  const Matrix oracle =
      ideal_unitary(gates[1], n).matrix() * ideal_unitary(gates[0], n).matrix();
  CHECK(phase_distance(propagate(seg), oracle) < 1e-10);
}

TEST_CASE("parallel rule violations are named") {
  const int n = 4;
  auto rule_of = [&](std::vector<GateSpec> gates,
                     std::vector<ShapeFunction> shapes) -> std::string {
    try {
      schedule_parallel(gates, shapes, 1e-6, n);
    } catch (const SchedulingError& e) {
      return e.rule();
    }
    return "accepted";
  };
  const ShapeFunction g = gauss();
  CHECK(rule_of({ZRotation{0, 1.0}, GlobalRotation{0.0, pi / 2}}, {g, g}) ==
        "group-mixing");
  CHECK(rule_of({ZRotation{1, 1.0}, ControlledPhase{1, 1.0}}, {g, g}) ==
        "site-overlap");
  CHECK(rule_of({SwapPower{0, 1.0}, ControlledPhase{1, 1.0}}, {g, g}) ==
        "separated-pairs");
  CHECK(rule_of({SwapPower{0, 1.0}, ControlledPhase{2, 1.0}}, {g, g}) ==
        "accepted");
  CHECK(rule_of({SelectiveRotation{{1, 0, 0}, pi, {1}}, SwapPower{0, 1.0}},
                {g, g}) == "swap-unaffected-by-rotations");
  CHECK(rule_of({SelectiveRotation{{1, 0, 0}, pi, {0}},
                 SelectiveRotation{{1, 0, 0}, pi, {2}}},
                {g, shifted_gaussian(0.3)}) == "shape-equality");
  CHECK(rule_of({SelectiveRotation{{1, 0, 0}, pi, {0}},
                 SelectiveRotation{{0, 1, 0}, pi, {2}}},
                {g, g}) == "synchronous-rotation");
  CHECK(rule_of({Cnot{0, 1}}, {g}) == "unsupported-gate");
  CHECK(rule_of({SwapPower{0, 1.0}, SwapPower{2, 0.5}}, {g, g}) == "accepted");
}

TEST_CASE("parallel ESR group with a synchronously rotating SWAP") {
  const int n = 4;
  const std::vector<GateSpec> gates{
      SelectiveRotation{{1, 0, 0}, pi / 2, {0, 1}}, SwapPower{0, 0.5},
      SwapPower{2, 1.0}};
  const std::vector<ShapeFunction> shapes{gauss(), shifted_gaussian(0.1),
                                          shifted_gaussian(0.3)};
  const PulseSegment seg = schedule_parallel(gates, shapes, 1e-6, n);
  Matrix oracle = Matrix::Identity(16, 16);
  for (const GateSpec& g : gates)
    oracle = ideal_unitary(g, n).matrix() * oracle;
  CHECK(phase_distance(propagate(seg), oracle) < 1e-10);
}
