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

#include <random>

#include "spinforge/errors.hpp"
#include "spinforge/spinops.hpp"
#include "test_support.hpp"

using namespace spinforge;
using namespace spinforge::testing;

TEST_CASE("register_dim enforces the supported register sizes") {
  CHECK(register_dim(1) == 2);
  CHECK(register_dim(10) == 1024);
  CHECK_THROWS_AS(register_dim(0), ValidationError);
  CHECK_THROWS_AS(register_dim(11), ValidationError);
}

TEST_CASE("pauli_embed matches explicit Kronecker products") {
  const std::pair<Pauli, char> axes[] = {
      {Pauli::kX, 'x'}, {Pauli::kY, 'y'}, {Pauli::kZ, 'z'}};
  for (int n = 1; n <= 4; ++n) {
    for (int site = 0; site < n; ++site) {
      for (auto [axis, name] : axes) {
        CHECK(max_diff(pauli_embed(axis, site, n).matrix(),
                       pauli_oracle(name, site, n)) == 0.0);
      }
    }
  }
  CHECK_THROWS_AS(pauli_embed(Pauli::kX, 3, 3), std::out_of_range);
  CHECK_THROWS_AS(pauli_embed(Pauli::kX, -1, 3), std::out_of_range);
}

TEST_CASE("site 0 is the most significant bit") {
  // X on site 0 of two qubits maps |00> (index 0) to |10> (index 2).
  const Operator x0 = pauli_embed(Pauli::kX, 0, 2);
  CHECK(x0(2, 0) == Complex(1.0, 0.0));
  // Y|0> = i|1>.
  const Operator y = pauli_embed(Pauli::kY, 0, 1);
  CHECK(y(1, 0) == Complex(0.0, 1.0));
}

TEST_CASE("exchange term equals 2 SWAP - 1 and sums the Pauli products") {
  for (int n = 2; n <= 4; ++n) {
    for (int j = 0; j + 1 < n; ++j) {
      const Matrix oracle =
          pauli_oracle('x', j, n) * pauli_oracle('x', j + 1, n) +
          pauli_oracle('y', j, n) * pauli_oracle('y', j + 1, n) +
          pauli_oracle('z', j, n) * pauli_oracle('z', j + 1, n);
      CHECK(max_diff(exchange_term(j, n).matrix(), oracle) < 1e-15);
      const Matrix twice_swap_minus_one =
          2.0 * swap_matrix(j, n).matrix() -
          Matrix::Identity(oracle.rows(), oracle.cols());
      CHECK(max_diff(twice_swap_minus_one, oracle) < 1e-15);
    }
  }
  CHECK_THROWS_AS(exchange_term(2, 3), std::out_of_range);
}

TEST_CASE("swap_matrix permutes basis states by brute force") {
  const int n = 4;
  for (int j = 0; j + 1 < n; ++j) {
    const Operator s = swap_matrix(j, n);
    for (int idx = 0; idx < 16; ++idx) {
      // Decode bits with site 0 most significant, swap, re-encode.
      int bits[4];
      for (int q = 0; q < n; ++q) bits[q] = (idx >> (n - 1 - q)) & 1;
      std::swap(bits[j], bits[j + 1]);
      int out = 0;
      for (int q = 0; q < n; ++q) out = (out << 1) | bits[q];
      for (int r = 0; r < 16; ++r) {
        CHECK(s(r, idx) == Complex(r == out ? 1.0 : 0.0, 0.0));
      }
    }
  }
}

TEST_CASE("commutator_norm") {
  const Operator x = pauli_embed(Pauli::kX, 0, 2);
  const Operator z0 = pauli_embed(Pauli::kZ, 0, 2);
  const Operator z1 = pauli_embed(Pauli::kZ, 1, 2);
  // [X, Z] = -2i Y, whose largest entry is 2.
  CHECK(commutator_norm(x, z0) == doctest::Approx(2.0));
  CHECK(commutator_norm(x, z1) == 0.0);
}

TEST_CASE("hermitian_expm agrees with a Taylor-series oracle") {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> normal;
  for (int n = 1; n <= 3; ++n) {
    const Eigen::Index d = register_dim(n);
    Matrix a(d, d);
    for (Eigen::Index i = 0; i < d; ++i)
      for (Eigen::Index j = 0; j < d; ++j)
        a(i, j) = Complex(normal(rng), normal(rng));
    const Operator h(n, (a + a.adjoint()) / 2.0);
    const Operator u = hermitian_expm(h, 0.7);
    CHECK(u.is_unitary());
    CHECK(max_diff(u.matrix(), expm_oracle(0.7 * h.matrix())) < 1e-12);
  }
  Matrix bad = Matrix::Zero(2, 2);
  bad(0, 1) = 1.0;
  CHECK_THROWS_AS(hermitian_expm(Operator(1, bad), 1.0), ValidationError);
}

TEST_CASE("Operator arithmetic and validation") {
  const Operator a = pauli_embed(Pauli::kX, 0, 2);
  const Operator b = pauli_embed(Pauli::kX, 0, 3);
  CHECK_THROWS_AS(a + b, DimensionError);
  CHECK_THROWS_AS(a * b, DimensionError);
  CHECK_THROWS_AS(Operator(2, Matrix::Identity(3, 3)), DimensionError);
  CHECK(max_diff((a * a).matrix(), Operator::identity(2).matrix()) == 0.0);
  CHECK((a - a).max_abs() == 0.0);
  CHECK(a.is_hermitian());
  CHECK(a.is_unitary());
  CHECK(Operator::zero(2).is_hermitian());
  CHECK_FALSE((2.0 * a).is_unitary());
  CHECK(a.trace() == Complex(0.0, 0.0));
}

TEST_CASE("kron puts the first factor on the leading sites") {
  const Operator x(1, pauli2('x'));
  const Operator z(1, pauli2('z'));
  CHECK(max_diff(kron(x, z).matrix(), kron_oracle(pauli2('x'), pauli2('z'))) ==
        0.0);
  CHECK(kron(x, z).n_qubits() == 2);
}
