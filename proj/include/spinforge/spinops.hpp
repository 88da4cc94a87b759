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

// Dense operator algebra on an N-qubit register.
//
// Basis ordering: site 0 is the most significant bit of the basis index, so
// a two-qubit operator A (x) B acts with A on site 0. Hamiltonians are stored
// in whatever units the caller labels them with; all helpers here are
// unit-agnostic.

#include <Eigen/Dense>
#include <complex>
#include <cstdint>

namespace spinforge {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;

inline constexpr int kMaxQubits = 10;
inline constexpr double kHermitianTolerance = 1e-12;
inline constexpr double kUnitaryTolerance = 1e-10;

enum class Pauli { kX, kY, kZ };

// A dense square matrix on the 2^N-dimensional register space. Immutable
// once built; arithmetic returns new operators.
class Operator {
 public:
  Operator() = default;
  Operator(int n_qubits, Matrix entries);

  static Operator identity(int n_qubits);
  static Operator zero(int n_qubits);

  int n_qubits() const noexcept { return n_qubits_; }
  Eigen::Index dim() const noexcept { return entries_.rows(); }
  const Matrix& matrix() const noexcept { return entries_; }
  Complex operator()(Eigen::Index row, Eigen::Index col) const {
    return entries_(row, col);
  }

  Operator adjoint() const;
  Complex trace() const { return entries_.trace(); }

  // Largest entry magnitude.
  double max_abs() const;

  // max|A - A^dagger| < rel_tol * max|A| (a zero matrix is Hermitian).
  bool is_hermitian(double rel_tol = kHermitianTolerance) const;
  // max|U^dagger U - I| < tol.
  bool is_unitary(double tol = kUnitaryTolerance) const;

  friend Operator operator+(const Operator& a, const Operator& b);
  friend Operator operator-(const Operator& a, const Operator& b);
  friend Operator operator*(const Operator& a, const Operator& b);
  friend Operator operator*(Complex s, const Operator& a);
  friend Operator operator*(double s, const Operator& a) {
    return Complex(s, 0.0) * a;
  }

 private:
  int n_qubits_ = 0;
  Matrix entries_ = Matrix::Identity(1, 1);
};

// Register dimension 2^n after checking 1 <= n <= kMaxQubits.
Eigen::Index register_dim(int n_qubits);

// I (x) ... (x) sigma_axis (x) ... (x) I with sigma at `site`.
Operator pauli_embed(Pauli axis, int site, int n_qubits);

// X_j X_{j+1} + Y_j Y_{j+1} + Z_j Z_{j+1}; equals 2 SWAP_{j,j+1} - 1.
Operator exchange_term(int site, int n_qubits);

// Permutation matrix exchanging the states of sites j and j+1.
Operator swap_matrix(int site, int n_qubits);

// max|ab - ba|.
double commutator_norm(const Operator& a, const Operator& b);

// exp(-i * scale * h) for Hermitian h, via the spectral decomposition.
// Throws ValidationError when h is not Hermitian within tolerance.
Operator hermitian_expm(const Operator& h, double scale);

// Tensor product; the result acts on a.n_qubits() + b.n_qubits() sites with
// `a` on the leading ones.
Operator kron(const Operator& a, const Operator& b);

}  // namespace spinforge
