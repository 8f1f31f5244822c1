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

#pragma once

#include <complex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace qcontract {

using Complex = std::complex<double>;

/// Dense d x d operator (state or observable). Column-major storage, so the
/// raw data of an Operator is its column-stacked vectorization.
using Operator = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

inline constexpr Complex kI{0.0, 1.0};

/// Library-wide numerical tolerances. All are absolute on the max-entry norm
/// unless noted.
struct Tolerances {
  double hermitian = 1e-10;
  double orthogonal = 1e-10;
  /// Relative to the norm of the expanded operator.
  double expand = 1e-10;
};

/// Hilbert-Schmidt pairing Tr(A^dagger B).
Complex hs_inner(const Operator& a, const Operator& b);

/// AB - BA.
Operator commutator(const Operator& a, const Operator& b);

/// Largest entry modulus.
double max_abs(const Operator& a);

bool is_hermitian(const Operator& a, double tol = Tolerances{}.hermitian);

/// Ordered family of operators of a common dimension.
///
/// When `interior_dim` is set the basis is interior-projected: expansions act
/// on the top-left interior_dim x interior_dim block only. Truncated Fock
/// spaces use this to discard the boundary defect of the ladder operators.
class OperatorBasis {
 public:
  OperatorBasis(std::vector<Operator> elements, std::vector<std::string> labels,
                std::optional<int> interior_dim = std::nullopt);

  int dim() const noexcept { return dim_; }
  int size() const noexcept { return static_cast<int>(elements_.size()); }
  const std::vector<Operator>& elements() const noexcept { return elements_; }
  const Operator& operator[](int i) const { return elements_[static_cast<std::size_t>(i)]; }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  std::optional<int> interior_dim() const noexcept { return interior_dim_; }
  bool orthogonal() const noexcept { return orthogonal_; }

  /// Index of the element with the given label, if any.
  std::optional<int> find(const std::string& label) const;

  /// Compresses an operator onto the interior block (identity when the basis
  /// is not interior-projected).
  Operator project(const Operator& a) const;

  /// Gram matrix of the (projected) elements.
  const Eigen::MatrixXcd& gram() const noexcept { return gram_; }
  double gram_condition() const noexcept { return gram_condition_; }

  /// Returns sum_k coeffs[k] * elements[k].
  Operator combine(const ComplexVector& coeffs) const;

 private:
  int dim_;
  std::vector<Operator> elements_;
  std::vector<std::string> labels_;
  std::optional<int> interior_dim_;
  bool orthogonal_ = false;
  Eigen::MatrixXcd gram_;
  double gram_condition_ = 1.0;
};

/// {sigma0, sigma1, sigma2, sigma3}.
OperatorBasis pauli_basis();

/// The Pauli matrix sigma_alpha, alpha in 0..3.
Operator pauli(int alpha);

/// The d^2 matrix units E_mn = |m><n| in row-major (m, n) order.
OperatorBasis matrix_unit_basis(int d);

Operator matrix_unit(int d, int m, int n);

/// Clock U = sum_m lambda^m |m><m| and shift V = sum_k lambda^-k |k~><k~|,
/// lambda = exp(2 pi i / d), |k~> = d^-1/2 sum_m lambda^km |m>, so that V|m> = |m+1>
/// and U^k V^l = lambda^kl V^l U^k. Position labels
/// m run over 1..d and occupy the 0-indexed slots 0..d-1.
std::pair<Operator, Operator> schwinger_pair(int d);

/// Weyl basis {U^k V^l : k, l = 0..d-1} built from the Schwinger pair.
OperatorBasis weyl_basis(int d);

/// Truncated annihilation operator on Fock levels 0..n_max.
Operator annihilation(int n_max);

/// Number operator diag(0..n_max).
Operator number_operator(int n_max);

/// Coefficients of `a` in `basis` plus the norm of the out-of-span remainder.
struct Expansion {
  ComplexVector coefficients;
  double residual = 0.0;
};

/// Gram-matrix least-squares expansion. Never throws on a large residual.
Expansion expand_with_residual(const Operator& a, const OperatorBasis& basis);

/// Expansion that enforces reconstruction within tol.expand * ||a||.
ComplexVector expand_in_basis(const Operator& a, const OperatorBasis& basis,
                              const Tolerances& tol = {});

}  // namespace qcontract
