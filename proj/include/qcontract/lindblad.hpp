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

#include <vector>

#include "qcontract/expm.hpp"
#include "qcontract/operator_core.hpp"

namespace qcontract {

/// One dissipative channel: jump operator and its nonnegative rate.
struct Jump {
  Operator op;
  double rate = 0.0;
};

/// GKSL data L rho = -i[H, rho] + sum_k rate_k (L_k rho L_k^dag - 1/2 {L_k^dag L_k, rho}).
struct LindbladSpec {
  int dim = 0;
  Operator hamiltonian;
  std::vector<Jump> jumps;

  /// Throws SpecError when the Hamiltonian is not Hermitian, a rate is
  /// negative or dimensions disagree.
  void validate(const Tolerances& tol = {}) const;
};

/// Linear map on d x d operators stored as a d^2 x d^2 matrix acting on
/// column-stacked vectorizations, vec(A rho B) = (B^T kron A) vec(rho).
class Superoperator {
 public:
  Superoperator() = default;
  Superoperator(int dim, Eigen::MatrixXcd matrix);

  static Superoperator identity(int dim);

  int dim() const noexcept { return dim_; }
  const Eigen::MatrixXcd& matrix() const noexcept { return matrix_; }

  Superoperator operator*(const Superoperator& rhs) const;

 private:
  int dim_ = 0;
  Eigen::MatrixXcd matrix_;
};

/// vec(A) under column stacking.
ComplexVector vectorize(const Operator& a);
Operator unvectorize(const ComplexVector& v, int dim);

/// Superoperator of A rho B.
Eigen::MatrixXcd sandwich(const Operator& left, const Operator& right);

Superoperator build_generator(const LindbladSpec& spec);

/// Hilbert-Schmidt dual L^#: the conjugate transpose of L's matrix. For the
/// Hermiticity-preserving maps used here this satisfies
/// Tr(L(rho) A) = Tr(rho L^#(A)).
Superoperator adjoint_generator(const Superoperator& generator);

/// Independent construction of L^# from the GKSL data:
/// L^# A = i[H, A] + sum_k rate_k (L_k^dag A L_k - 1/2 {L_k^dag L_k, A}).
Superoperator adjoint_generator_from_spec(const LindbladSpec& spec);

/// exp(t L) via Pade scaling and squaring. Negative t is allowed.
Superoperator propagator(const Superoperator& generator, double t);

Operator apply(const Superoperator& map, const Operator& a);

/// Induced 1-norm condition number ||S||_1 ||S^-1||_1 (infinite when either
/// factor is not finite).
double condition_estimate(const Superoperator& map, const Superoperator& inverse);

struct InversePropagator {
  Superoperator inverse;
  /// Condition number of exp(tL); the inverse amplifies relative error by it.
  double condition = 1.0;
};

/// exp(-t L) together with the condition estimate of exp(t L).
/// Throws IllConditionedError when the estimate exceeds cond_max.
InversePropagator inverse_propagator(const Superoperator& generator, double t, double cond_max = 1e12);

/// Propagators exp(t L) at many times from one generator. Decoupled blocks of
/// L use a cached eigendecomposition when their eigenvectors are well
/// conditioned and Pade otherwise. Immutable after construction.
class PropagatorFamily {
 public:
  explicit PropagatorFamily(Superoperator generator);

  const Superoperator& generator() const noexcept { return generator_; }
  bool spectral() const noexcept { return exponential_.fully_spectral(); }
  /// Eigenvalues of the generator, block by block.
  const ComplexVector& eigenvalues() const noexcept { return exponential_.eigenvalues(); }

  Superoperator at(double t) const;

 private:
  Superoperator generator_;
  BlockExponential exponential_;
};

struct CptpReport {
  bool trace_preserving = false;
  double trace_deviation = 0.0;
  bool hermiticity_preserving = false;
  double hermiticity_deviation = 0.0;
  double choi_min_eigenvalue = 0.0;
  bool completely_positive = false;
  bool unital_adjoint = false;
  double unital_deviation = 0.0;
};

/// Diagnostic only: negative-time propagators are legitimate linear maps that
/// simply fail these checks.
CptpReport verify_cptp(const Superoperator& map, double tol = 1e-10);

/// Choi matrix sum_mn E_mn kron S(E_mn).
Eigen::MatrixXcd choi_matrix(const Superoperator& map);

}  // namespace qcontract
