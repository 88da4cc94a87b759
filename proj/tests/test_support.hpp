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

// Independent oracles shared by the unit tests. Nothing here calls into the
// library's own constructions of the objects under test.

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <vector>

#include "spinforge/spinops.hpp"

namespace spinforge::testing {

inline Matrix pauli2(char axis) {
  Matrix m(2, 2);
  const Complex i(0.0, 1.0);
  switch (axis) {
    case 'x':
      m << 0, 1, 1, 0;
      break;
    case 'y':
      m << 0, -i, i, 0;
      break;
    case 'z':
      m << 1, 0, 0, -1;
      break;
    default:
      m = Matrix::Identity(2, 2);
  }
  return m;
}

// Explicit Kronecker product by index arithmetic.
inline Matrix kron_oracle(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      for (Eigen::Index k = 0; k < b.rows(); ++k)
        for (Eigen::Index l = 0; l < b.cols(); ++l)
          out(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
  return out;
}

// Single-site operator embedded by repeated Kronecker products, site 0
// leftmost.
inline Matrix embed_oracle(const Matrix& op, int site, int n) {
  Matrix out = Matrix::Identity(1, 1);
  for (int s = 0; s < n; ++s) {
    out = kron_oracle(out, s == site ? op : Matrix::Identity(2, 2));
  }
  return out;
}

inline Matrix pauli_oracle(char axis, int site, int n) {
  return embed_oracle(pauli2(axis), site, n);
}

// Two-site operator on (site, site + 1).
inline Matrix embed_pair_oracle(const Matrix& op4, int site, int n) {
  Matrix out = Matrix::Identity(1, 1);
  for (int s = 0; s < n;) {
    if (s == site) {
      out = kron_oracle(out, op4);
      s += 2;
    } else {
      out = kron_oracle(out, Matrix::Identity(2, 2));
      ++s;
    }
  }
  return out;
}

// exp(-i h) by Taylor series with scaling and squaring; independent of any
// eigendecomposition.
inline Matrix expm_oracle(const Matrix& h) {
  const Complex minus_i(0.0, -1.0);
  double norm = h.cwiseAbs().rowwise().sum().maxCoeff();
  int squarings = 0;
  while (norm > 0.05) {
    norm /= 2.0;
    ++squarings;
  }
  const Matrix a = minus_i * h / std::pow(2.0, squarings);
  Matrix term = Matrix::Identity(h.rows(), h.cols());
  Matrix sum = term;
  for (int k = 1; k < 30; ++k) {
    term = term * a / static_cast<double>(k);
    sum += term;
  }
  for (int s = 0; s < squarings; ++s) sum = sum * sum;
  return sum;
}

// max|U - e^{i phase} V| with the phase fixed by Tr(V^dagger U).
inline double phase_distance(const Matrix& u, const Matrix& v) {
  const Complex overlap = (v.adjoint() * u).trace();
  const Complex phase =
      std::abs(overlap) > 0 ? overlap / std::abs(overlap) : Complex(1.0);
  return (u - phase * v).cwiseAbs().maxCoeff();
}

inline double max_diff(const Matrix& a, const Matrix& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

// Single-qubit rotation exp(-i theta n.sigma / 2) via the oracle expm.
inline Matrix rotation_oracle(double nx, double ny, double nz, double theta) {
  const Matrix gen =
      0.5 * theta * (nx * pauli2('x') + ny * pauli2('y') + nz * pauli2('z'));
  return expm_oracle(gen);
}

}  // namespace spinforge::testing
