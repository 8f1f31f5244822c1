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

#include <cstddef>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "qcontract/lindblad.hpp"
#include "qcontract/operator_core.hpp"

namespace qcontract {

/// C^k_ij for a basis of size n, stored with index order (k, i, j).
struct StructureTensor {
  int n = 0;
  /// +infinity marks a t -> infinity limit.
  double time = 0.0;
  std::vector<Complex> values;

  StructureTensor() = default;
  StructureTensor(int size, double t) : n(size), time(t), values(static_cast<std::size_t>(size) * size * size) {}

  Complex& at(int k, int i, int j) { return values[index(k, i, j)]; }
  const Complex& at(int k, int i, int j) const { return values[index(k, i, j)]; }
  bool is_limit() const noexcept { return time == std::numeric_limits<double>::infinity(); }

  /// max |C^k_ij + C^k_ji|.
  double antisymmetry_defect() const;
  double max_abs() const;

 private:
  std::size_t index(int k, int i, int j) const {
    return (static_cast<std::size_t>(k) * n + static_cast<std::size_t>(i)) * n + static_cast<std::size_t>(j);
  }
};

/// Time-t deformed product A ._t B = (L#_t)^-1 (L#_t(A) L#_t(B)) on the full
/// operator space, where L#_t = exp(t L#).
class DeformedProduct {
 public:
  /// Throws IllConditionedError when cond(L#_t) exceeds cond_max.
  DeformedProduct(const Superoperator& adjoint, double t, double cond_max = 1e12);
  DeformedProduct(const PropagatorFamily& adjoint_family, double t, double cond_max = 1e12);

  double time() const noexcept { return time_; }
  double condition() const noexcept { return condition_; }

  Operator forward(const Operator& a) const { return qcontract::apply(forward_, a); }
  Operator backward(const Operator& a) const { return qcontract::apply(backward_, a); }
  Operator product(const Operator& a, const Operator& b) const;
  Operator commutator(const Operator& a, const Operator& b) const;

 private:
  void check_condition(double cond_max);

  double time_;
  Superoperator forward_;
  Superoperator backward_;
  double condition_ = 1.0;
};

struct DeformedOptions {
  double cond_max = 1e12;
  /// Out-of-span remainder allowed for deformed brackets, relative.
  double tol_closure = 1e-8;
  /// Residual allowed when testing whether L# maps the basis span into itself.
  double tol_invariance = 1e-10;
  /// Also build full-space propagators so deformed_product works on arbitrary
  /// operators. When false, basis tables use the invariant-span route only.
  bool full_space = true;
};

/// Everything needed to evaluate the deformed algebra of a basis at time t.
///
/// If L# maps span(basis) into itself, the restriction G (L# A_i = sum_k
/// G_ki A_k) is exponentiated in coefficient space and structure constants
/// are inverted there. Its condition number is set by the decay rates of the
/// basis alone, not by the fastest mode of the whole operator space.
class DeformedAlgebraContext {
 public:
  DeformedAlgebraContext(const Superoperator& adjoint, OperatorBasis basis, double t,
                         const DeformedOptions& options = {},
                         std::shared_ptr<const PropagatorFamily> family = nullptr);

  const Superoperator& generator_adjoint() const noexcept { return adjoint_; }
  const OperatorBasis& basis() const noexcept { return basis_; }
  double time() const noexcept { return time_; }
  const DeformedOptions& options() const noexcept { return options_; }

  /// Condition number of the map inverted when building basis tables.
  double condition_estimate() const noexcept { return condition_; }

  bool span_invariant() const noexcept { return restricted_generator_.has_value(); }
  /// G with L# A_i = sum_k G_ki A_k, when the span is invariant.
  const std::optional<Eigen::MatrixXcd>& restricted_generator() const noexcept { return restricted_generator_; }
  /// exp(t G): column i holds the coefficients of L#_t(A_i).
  const std::optional<Eigen::MatrixXcd>& image_matrix() const noexcept { return image_; }

  bool has_full_space() const noexcept { return full_.has_value(); }
  /// Throws Error when built with full_space = false.
  const DeformedProduct& full() const;

  /// L#_t(A_i) for basis element i.
  Operator evolved_element(int i) const;

 private:
  friend StructureTensor structure_constants(const DeformedAlgebraContext&);
  friend StructureTensor product_constants(const DeformedAlgebraContext&);
  StructureTensor basis_table(bool commute) const;

  Superoperator adjoint_;
  OperatorBasis basis_;
  double time_;
  DeformedOptions options_;
  std::optional<Eigen::MatrixXcd> restricted_generator_;
  std::optional<Eigen::MatrixXcd> image_;
  std::optional<Eigen::MatrixXcd> inverse_image_;
  std::optional<DeformedProduct> full_;
  double condition_ = 1.0;
};

/// A ._t B.
Operator deformed_product(const DeformedAlgebraContext& ctx, const Operator& a, const Operator& b);

/// [A, B]_t = A ._t B - B ._t A.
Operator deformed_commutator(const DeformedAlgebraContext& ctx, const Operator& a, const Operator& b);

/// C^k_ij(t) from [A_i, A_j]_t = sum_k C^k_ij(t) A_k. Throws ClosureError
/// if a deformed commutator leaves the span of the basis.
StructureTensor structure_constants(const DeformedAlgebraContext& ctx);

/// P^k_ij(t) from A_i ._t A_j = sum_k P^k_ij(t) A_k. Throws ClosureError if
/// the basis is not closed under the product.
StructureTensor product_constants(const DeformedAlgebraContext& ctx);

/// Outcome of extrapolating one scalar sequence x(t_0), x(t_1), ...
struct SequenceLimit {
  bool converged = false;
  bool diverging = false;
  Complex value{0.0, 0.0};
  /// Last Cauchy difference (raw or between extrapolants).
  double delta = 0.0;
  /// Least-squares slope of log|x| against t.
  double growth_rate = 0.0;
};

/// Cauchy test on the raw tail, then on Aitken extrapolants of uniformly
/// spaced triples (exact for c + a q^n with complex q). A sequence whose
/// magnitudes and increments both keep growing is reported as diverging.
SequenceLimit analyze_sequence(std::span<const double> times, std::span<const Complex> values, double tol);

/// Throws Error unless the schedule has at least `min_size` strictly
/// increasing nonnegative finite entries.
void validate_schedule(std::span<const double> schedule, std::size_t min_size = 3);

struct WeakLimit {
  /// Present when the orbit converged.
  std::optional<Operator> limit;
  double growth_rate = 0.0;
  double final_delta = 0.0;
};

/// Limit of L#_t(A) along the schedule.
WeakLimit weak_limit_observable(const Superoperator& adjoint, const Operator& a, std::span<const double> schedule,
                                double tol = 1e-7);

/// Entrywise limit of a precomputed orbit A(t_0), A(t_1), ...
WeakLimit limit_of_orbit(std::span<const double> times, const std::vector<Operator>& orbit, double tol = 1e-7);

struct DivergentEntry {
  int k = 0;
  int i = 0;
  int j = 0;
  double rate = 0.0;
};

struct TableLimit {
  bool converged = false;
  std::optional<StructureTensor> limit;
  std::vector<DivergentEntry> divergent_entries;
  double final_delta = 0.0;
};

struct LimitReport {
  bool converged = false;
  std::optional<StructureTensor> limit;
  std::vector<DivergentEntry> divergent_entries;
  std::vector<double> times_used;
  double final_delta = 0.0;
  /// C(t) at each schedule time.
  std::vector<StructureTensor> series;
  /// Limit of the product table, when the basis is closed under products.
  /// Reported separately: a converging bracket does not imply a product limit.
  std::optional<TableLimit> product;
};

/// Entrywise limit of a series of tensors.
TableLimit extrapolate_tables(const std::vector<StructureTensor>& series, double tol);

/// C(t) along the schedule and its t -> infinity limit.
LimitReport asymptotic_structure_constants(const Superoperator& adjoint, const OperatorBasis& basis,
                                           std::span<const double> schedule, double tol = 1e-7,
                                           const DeformedOptions& options = {});

/// Uniform schedule gamma_ref * t in {2, 4, ..., 2 * max_points}, truncated
/// before the first time whose condition estimate exceeds cond_max.
std::vector<double> default_schedule(const Superoperator& adjoint, const OperatorBasis& basis, double gamma_ref,
                                     const DeformedOptions& options = {}, int max_points = 20);

}  // namespace qcontract
