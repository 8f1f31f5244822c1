// Copyright 2026 The qcontract Authors
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

#include "qcontract/operator_core.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "qcontract/errors.hpp"

namespace qcontract {

namespace {

void require_same_dim(const Operator& a, const Operator& b, const char* where) {
  if (a.rows() != b.rows() || a.cols() != b.cols() || a.rows() != a.cols()) {
    std::ostringstream msg;
    msg << where << ": dimension mismatch (" << a.rows() << "x" << a.cols()
        << " vs " << b.rows() << "x" << b.cols() << ")";
    throw DimensionError(msg.str());
  }
}

Complex root_of_unity(int d, long long power) {
  const long long r = ((power % d) + d) % d;
  const double angle = 2.0 * std::numbers::pi * static_cast<double>(r) / d;
  return std::polar(1.0, angle);
}

}  // namespace

Complex hs_inner(const Operator& a, const Operator& b) {
  require_same_dim(a, b, "hs_inner");
  // Tr(A^dagger B) = sum_ij conj(A_ij) B_ij
  return (a.array().conjugate() * b.array()).sum();
}

Operator commutator(const Operator& a, const Operator& b) {
  require_same_dim(a, b, "commutator");
  return a * b - b * a;
}

double max_abs(const Operator& a) {
  return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff();
}

bool is_hermitian(const Operator& a, double tol) {
  return a.rows() == a.cols() && max_abs(a - a.adjoint()) <= tol;
}

OperatorBasis::OperatorBasis(std::vector<Operator> elements, std::vector<std::string> labels,
                             std::optional<int> interior_dim)
    : elements_(std::move(elements)), labels_(std::move(labels)), interior_dim_(interior_dim) {
  if (elements_.empty()) throw BasisError("OperatorBasis: empty basis");
  dim_ = static_cast<int>(elements_.front().rows());
  for (const auto& e : elements_) {
    if (e.rows() != dim_ || e.cols() != dim_) throw DimensionError("OperatorBasis: elements differ in dimension");
  }
  if (labels_.empty()) {
    for (std::size_t i = 0; i < elements_.size(); ++i) labels_.push_back("A" + std::to_string(i));
  }
  if (labels_.size() != elements_.size()) throw BasisError("OperatorBasis: label count mismatch");
  if (interior_dim_ && (*interior_dim_ < 1 || *interior_dim_ > dim_)) {
    throw BasisError("OperatorBasis: interior dimension out of range");
  }

  const int n = size();
  std::vector<Operator> projected;
  projected.reserve(elements_.size());
  for (const auto& e : elements_) projected.push_back(project(e));
  gram_.resize(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) gram_(i, j) = hs_inner(projected[i], projected[j]);
  }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(gram_);
  const double lo = es.eigenvalues().minCoeff();
  const double hi = es.eigenvalues().maxCoeff();
  if (!(hi > 0.0) || lo <= hi * 1e-14) {
    throw BasisError("OperatorBasis: Gram matrix is singular (elements are linearly dependent)");
  }
  gram_condition_ = hi / lo;

  const double tol_orth = Tolerances{}.orthogonal;
  orthogonal_ = true;
  for (int i = 0; i < n && orthogonal_; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i != j && std::abs(gram_(i, j)) > tol_orth) {
        orthogonal_ = false;
        break;
      }
    }
  }
}

std::optional<int> OperatorBasis::find(const std::string& label) const {
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (labels_[i] == label) return static_cast<int>(i);
  }
  return std::nullopt;
}

Operator OperatorBasis::project(const Operator& a) const {
  if (a.rows() != dim_ || a.cols() != dim_) throw DimensionError("OperatorBasis::project: dimension mismatch");
  if (!interior_dim_) return a;
  return a.topLeftCorner(*interior_dim_, *interior_dim_);
}

Operator OperatorBasis::combine(const ComplexVector& coeffs) const {
  if (coeffs.size() != size()) throw DimensionError("OperatorBasis::combine: coefficient count mismatch");
  Operator out = Operator::Zero(dim_, dim_);
  for (int k = 0; k < size(); ++k) out += coeffs(k) * elements_[static_cast<std::size_t>(k)];
  return out;
}

Operator pauli(int alpha) {
  Operator s(2, 2);
  switch (alpha) {
    case 0: s << 1, 0, 0, 1; break;
    case 1: s << 0, 1, 1, 0; break;
    case 2: s << 0, -kI, kI, 0; break;
    case 3: s << 1, 0, 0, -1; break;
    default: throw DimensionError("pauli: index must be in 0..3");
  }
  return s;
}

OperatorBasis pauli_basis() {
  return OperatorBasis({pauli(0), pauli(1), pauli(2), pauli(3)},
                       {"sigma0", "sigma1", "sigma2", "sigma3"});
}

Operator matrix_unit(int d, int m, int n) {
  if (d < 1 || m < 0 || n < 0 || m >= d || n >= d) throw DimensionError("matrix_unit: index out of range");
  Operator e = Operator::Zero(d, d);
  e(m, n) = 1.0;
  return e;
}

OperatorBasis matrix_unit_basis(int d) {
  if (d < 1) throw DimensionError("matrix_unit_basis: d must be positive");
  std::vector<Operator> elems;
  std::vector<std::string> labels;
  for (int m = 0; m < d; ++m) {
    for (int n = 0; n < d; ++n) {
      elems.push_back(matrix_unit(d, m, n));
      labels.push_back("E" + std::to_string(m) + "_" + std::to_string(n));
    }
  }
  return OperatorBasis(std::move(elems), std::move(labels));
}

std::pair<Operator, Operator> schwinger_pair(int d) {
  if (d < 2) throw DimensionError("schwinger_pair: d must be at least 2");
  Operator u = Operator::Zero(d, d);
  for (int slot = 0; slot < d; ++slot) u(slot, slot) = root_of_unity(d, slot + 1);

  // Momentum eigenvectors, one per column; k and m run over 1..d.
  Operator momentum(d, d);
  const double norm = 1.0 / std::sqrt(static_cast<double>(d));
  for (int k = 1; k <= d; ++k) {
    for (int m = 1; m <= d; ++m) momentum(m - 1, k - 1) = norm * root_of_unity(d, static_cast<long long>(k) * m);
  }
  ComplexVector phases(d);
  for (int k = 1; k <= d; ++k) phases(k - 1) = root_of_unity(d, -k);
  Operator v = momentum * phases.asDiagonal() * momentum.adjoint();
  return {u, v};
}

OperatorBasis weyl_basis(int d) {
  auto [u, v] = schwinger_pair(d);
  std::vector<Operator> elems;
  std::vector<std::string> labels;
  Operator uk = Operator::Identity(d, d);
  for (int k = 0; k < d; ++k) {
    Operator vl = Operator::Identity(d, d);
    for (int l = 0; l < d; ++l) {
      elems.push_back(uk * vl);
      labels.push_back("U" + std::to_string(k) + "V" + std::to_string(l));
      vl = vl * v;
    }
    uk = uk * u;
  }
  return OperatorBasis(std::move(elems), std::move(labels));
}

Operator annihilation(int n_max) {
  if (n_max < 1) throw DimensionError("annihilation: n_max must be positive");
  Operator a = Operator::Zero(n_max + 1, n_max + 1);
  for (int n = 1; n <= n_max; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return a;
}

Operator number_operator(int n_max) {
  if (n_max < 1) throw DimensionError("number_operator: n_max must be positive");
  Operator num = Operator::Zero(n_max + 1, n_max + 1);
  for (int n = 0; n <= n_max; ++n) num(n, n) = static_cast<double>(n);
  return num;
}

Expansion expand_with_residual(const Operator& a, const OperatorBasis& basis) {
  if (a.rows() != basis.dim() || a.cols() != basis.dim()) {
    throw DimensionError("expand_in_basis: operator and basis dimensions differ");
  }
  const Operator target = basis.project(a);
  const int n = basis.size();
  ComplexVector rhs(n);
  for (int i = 0; i < n; ++i) rhs(i) = hs_inner(basis.project(basis[i]), target);
  Expansion out;
  out.coefficients = basis.gram().ldlt().solve(rhs);
  Operator rebuilt = Operator::Zero(target.rows(), target.cols());
  for (int k = 0; k < n; ++k) rebuilt += out.coefficients(k) * basis.project(basis[k]);
  out.residual = (target - rebuilt).norm();
  return out;
}

ComplexVector expand_in_basis(const Operator& a, const OperatorBasis& basis, const Tolerances& tol) {
  Expansion e = expand_with_residual(a, basis);
  const double scale = basis.project(a).norm();
  if (e.residual > tol.expand * scale) {
    std::ostringstream msg;
    msg << "expand_in_basis: operator lies outside the basis span (residual " << e.residual << ")";
    throw ExpansionError(msg.str(), e.residual);
  }
  return e.coefficients;
}

}  // namespace qcontract
