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

#include <optional>
#include <string>
#include <vector>

#include "qcontract/deformed_product.hpp"
#include "qcontract/lindblad.hpp"

namespace qcontract {

enum class LieLabel { abelian, heisenberg, e2, iso11, su2_so3, sl2r_so21, solvable_other, unclassified };

std::string to_string(LieLabel label);
std::optional<LieLabel> parse_lie_label(const std::string& text);

struct KillingSignature {
  int positive = 0;
  int negative = 0;
  int zero = 0;
};

struct LieClassification {
  LieLabel label = LieLabel::unclassified;
  /// Signature of the Killing form of the full input algebra.
  KillingSignature killing_signature;
  int center_dim = 0;
  int derived_dim = 0;
  /// Central directions divided out before the low-dimensional rules ran.
  int quotient_dim = 0;
  /// False when no global phase makes the structure constants real; the
  /// Killing sign is then meaningless and only phase-free labels are decided.
  bool real_form = true;
  double jacobi_residual = 0.0;
  std::string note;
};

struct ClassifyOptions {
  /// Rank and signature decisions, relative to the largest singular value.
  double rel_tol = 1e-9;
  /// Tensors with all |C| below this are abelian.
  double zero_tol = 1e-8;
  /// Coefficient vectors to quotient out. When absent, the center is divided
  /// out automatically for algebras of dimension above three.
  std::optional<std::vector<ComplexVector>> quotient;
};

/// max over basis triples (i, j, l) of the 2-norm over k of
/// sum_m C^m_ij C^k_ml + C^m_jl C^k_mi + C^m_li C^k_mj.
double jacobi_residual(const StructureTensor& c);

/// K_ij = sum_{m,k} C^m_ik C^k_jm, evaluated after rotating C by the common
/// phase that makes it real (Hermitian bases give purely imaginary C, which
/// is rotated by -i). Returns the real part.
Eigen::MatrixXd killing_form(const StructureTensor& c);

/// Orthonormal coefficient vectors v with sum_i v_i C^k_ij = 0 for all j, k.
std::vector<ComplexVector> center(const StructureTensor& c, double rel_tol = 1e-9);

/// Dimension of span{[A_i, A_j]}.
int derived_dimension(const StructureTensor& c, double rel_tol = 1e-9);

/// Structure constants of g / span(vectors), in an orthonormal complement
/// basis. The vectors must span an ideal (typically central).
StructureTensor quotient(const StructureTensor& c, const std::vector<ComplexVector>& vectors);

LieClassification classify(const StructureTensor& c, const ClassifyOptions& options = {});

/// Observables annihilated by L#: fixed points of the adjoint semigroup.
struct KernelReport {
  int kernel_dim = 0;
  std::vector<Operator> kernel_basis;
  bool closed_under_commutator = false;
  bool commutant_is_abelian = false;
};

KernelReport kernel_of_adjoint(const Superoperator& adjoint, double rel_tol = 1e-9);

}  // namespace qcontract
