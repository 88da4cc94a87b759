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

#include "spinforge/spinops.hpp"

#include <Eigen/Eigenvalues>
#include <string>

#include "spinforge/errors.hpp"

namespace spinforge {
namespace {

Eigen::Index bit_of(int site, int n_qubits) {
  return Eigen::Index{1} << (n_qubits - 1 - site);
}

void check_site(int site, int n_qubits, const char* what) {
  if (site < 0 || site >= n_qubits) {
    throw std::out_of_range(std::string(what) + ": site " +
                            std::to_string(site) + " outside register of " +
                            std::to_string(n_qubits) + " qubits");
  }
}

void check_same_dims(const Operator& a, const Operator& b, const char* what) {
  if (a.dim() != b.dim()) {
    throw DimensionError(std::string(what) + ": dimension mismatch (" +
                         std::to_string(a.dim()) + " vs " +
                         std::to_string(b.dim()) + ")");
  }
}

}  // namespace

Eigen::Index register_dim(int n_qubits) {
  if (n_qubits < 1 || n_qubits > kMaxQubits) {
    throw ValidationError("register size must be in [1, " +
                          std::to_string(kMaxQubits) + "], got " +
                          std::to_string(n_qubits));
  }
  return Eigen::Index{1} << n_qubits;
}

Operator::Operator(int n_qubits, Matrix entries)
    : n_qubits_(n_qubits), entries_(std::move(entries)) {
  if (n_qubits < 0 || n_qubits > kMaxQubits) {
    throw ValidationError("operator register size out of range: " +
                          std::to_string(n_qubits));
  }
  const Eigen::Index expected = Eigen::Index{1} << n_qubits;
  if (entries_.rows() != expected || entries_.cols() != expected) {
    throw DimensionError("operator on " + std::to_string(n_qubits) +
                         " qubits must be " + std::to_string(expected) + "x" +
                         std::to_string(expected));
  }
}

Operator Operator::identity(int n_qubits) {
  const auto d = register_dim(n_qubits);
  return Operator(n_qubits, Matrix::Identity(d, d));
}

Operator Operator::zero(int n_qubits) {
  const auto d = register_dim(n_qubits);
  return Operator(n_qubits, Matrix::Zero(d, d));
}

Operator Operator::adjoint() const {
  return Operator(n_qubits_, entries_.adjoint());
}

double Operator::max_abs() const {
  return entries_.size() == 0 ? 0.0 : entries_.cwiseAbs().maxCoeff();
}

bool Operator::is_hermitian(double rel_tol) const {
  const double scale = max_abs();
  if (scale == 0.0) return true;
  const double asym = (entries_ - entries_.adjoint()).cwiseAbs().maxCoeff();
  return asym < rel_tol * scale;
}

bool Operator::is_unitary(double tol) const {
  const Matrix defect =
      entries_.adjoint() * entries_ - Matrix::Identity(dim(), dim());
  return defect.cwiseAbs().maxCoeff() < tol;
}

Operator operator+(const Operator& a, const Operator& b) {
  check_same_dims(a, b, "operator+");
  return Operator(a.n_qubits_, a.entries_ + b.entries_);
}

Operator operator-(const Operator& a, const Operator& b) {
  check_same_dims(a, b, "operator-");
  return Operator(a.n_qubits_, a.entries_ - b.entries_);
}

Operator operator*(const Operator& a, const Operator& b) {
  check_same_dims(a, b, "operator*");
  return Operator(a.n_qubits_, a.entries_ * b.entries_);
}

Operator operator*(Complex s, const Operator& a) {
  return Operator(a.n_qubits_, s * a.entries_);
}

Operator pauli_embed(Pauli axis, int site, int n_qubits) {
  const auto d = register_dim(n_qubits);
  check_site(site, n_qubits, "pauli_embed");
  const auto mask = bit_of(site, n_qubits);
  Matrix m = Matrix::Zero(d, d);
  for (Eigen::Index col = 0; col < d; ++col) {
    const bool up = (col & mask) == 0;
    switch (axis) {
      case Pauli::kX:
        m(col ^ mask, col) = 1.0;
        break;
      case Pauli::kY:
        // Y|0> = i|1>, Y|1> = -i|0>
        m(col ^ mask, col) = up ? Complex(0.0, 1.0) : Complex(0.0, -1.0);
        break;
      case Pauli::kZ:
        m(col, col) = up ? 1.0 : -1.0;
        break;
    }
  }
  return Operator(n_qubits, std::move(m));
}

Operator exchange_term(int site, int n_qubits) {
  register_dim(n_qubits);
  if (site < 0 || site >= n_qubits - 1) {
    throw std::out_of_range("exchange_term: coupling " + std::to_string(site) +
                            " outside chain of " + std::to_string(n_qubits) +
                            " qubits");
  }
  Operator total = Operator::zero(n_qubits);
  for (Pauli p : {Pauli::kX, Pauli::kY, Pauli::kZ}) {
    total = total +
            pauli_embed(p, site, n_qubits) * pauli_embed(p, site + 1, n_qubits);
  }
  return total;
}

Operator swap_matrix(int site, int n_qubits) {
  const auto d = register_dim(n_qubits);
  if (site < 0 || site >= n_qubits - 1) {
    throw std::out_of_range("swap_matrix: coupling " + std::to_string(site) +
                            " outside chain of " + std::to_string(n_qubits) +
                            " qubits");
  }
  const auto left = bit_of(site, n_qubits);
  const auto right = bit_of(site + 1, n_qubits);
  Matrix m = Matrix::Zero(d, d);
  for (Eigen::Index col = 0; col < d; ++col) {
    const bool l = (col & left) != 0;
    const bool r = (col & right) != 0;
    const Eigen::Index row = l == r ? col : col ^ left ^ right;
    m(row, col) = 1.0;
  }
  return Operator(n_qubits, std::move(m));
}

double commutator_norm(const Operator& a, const Operator& b) {
  check_same_dims(a, b, "commutator_norm");
  const Matrix c = a.matrix() * b.matrix() - b.matrix() * a.matrix();
  return c.cwiseAbs().maxCoeff();
}

Operator hermitian_expm(const Operator& h, double scale) {
  if (!h.is_hermitian()) {
    throw ValidationError("hermitian_expm: generator is not Hermitian");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> solver(h.matrix());
  if (solver.info() != Eigen::Success) {
    throw ValidationError("hermitian_expm: eigensolver failed");
  }
  const Eigen::VectorXd& w = solver.eigenvalues();
  const Matrix& v = solver.eigenvectors();
  Eigen::VectorXcd phases(w.size());
  for (Eigen::Index k = 0; k < w.size(); ++k) {
    phases(k) = std::polar(1.0, -scale * w(k));
  }
  return Operator(h.n_qubits(), v * phases.asDiagonal() * v.adjoint());
}

Operator kron(const Operator& a, const Operator& b) {
  const Eigen::Index da = a.dim();
  const Eigen::Index db = b.dim();
  Matrix m(da * db, da * db);
  for (Eigen::Index i = 0; i < da; ++i) {
    for (Eigen::Index j = 0; j < da; ++j) {
      m.block(i * db, j * db, db, db) = a(i, j) * b.matrix();
    }
  }
  return Operator(a.n_qubits() + b.n_qubits(), std::move(m));
}

}  // namespace spinforge
