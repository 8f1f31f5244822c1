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

#include "qcontract/lindblad.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "qcontract/errors.hpp"

namespace qcontract {

namespace {

Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

double one_norm(const Eigen::MatrixXcd& a) { return a.cwiseAbs().colwise().sum().maxCoeff(); }

}  // namespace

void LindbladSpec::validate(const Tolerances& tol) const {
  if (dim < 1) throw SpecError("LindbladSpec: dim must be positive");
  if (hamiltonian.rows() != dim || hamiltonian.cols() != dim) {
    throw SpecError("LindbladSpec: Hamiltonian dimension does not match dim");
  }
  if (!hamiltonian.allFinite()) throw SpecError("LindbladSpec: Hamiltonian has non-finite entries");
  if (!is_hermitian(hamiltonian, tol.hermitian)) throw SpecError("LindbladSpec: Hamiltonian is not Hermitian");
  for (std::size_t k = 0; k < jumps.size(); ++k) {
    const auto& j = jumps[k];
    if (j.op.rows() != dim || j.op.cols() != dim) {
      throw SpecError("LindbladSpec: jump " + std::to_string(k) + " has the wrong dimension");
    }
    if (!j.op.allFinite() || !std::isfinite(j.rate)) {
      throw SpecError("LindbladSpec: jump " + std::to_string(k) + " is not finite");
    }
    if (j.rate < 0.0) throw SpecError("LindbladSpec: jump " + std::to_string(k) + " has a negative rate");
  }
}

Superoperator::Superoperator(int dim, Eigen::MatrixXcd matrix) : dim_(dim), matrix_(std::move(matrix)) {
  const Eigen::Index n = static_cast<Eigen::Index>(dim) * dim;
  if (dim < 1 || matrix_.rows() != n || matrix_.cols() != n) {
    throw DimensionError("Superoperator: matrix must be d^2 x d^2");
  }
}

Superoperator Superoperator::identity(int dim) {
  const Eigen::Index n = static_cast<Eigen::Index>(dim) * dim;
  return Superoperator(dim, Eigen::MatrixXcd::Identity(n, n));
}

Superoperator Superoperator::operator*(const Superoperator& rhs) const {
  if (dim_ != rhs.dim_) throw DimensionError("Superoperator composition: dimension mismatch");
  return Superoperator(dim_, matrix_ * rhs.matrix_);
}

ComplexVector vectorize(const Operator& a) {
  return Eigen::Map<const ComplexVector>(a.data(), a.size());
}

Operator unvectorize(const ComplexVector& v, int dim) {
  if (v.size() != static_cast<Eigen::Index>(dim) * dim) throw DimensionError("unvectorize: size mismatch");
  return Eigen::Map<const Operator>(v.data(), dim, dim);
}

Eigen::MatrixXcd sandwich(const Operator& left, const Operator& right) {
  return kron(right.transpose(), left);
}

Superoperator build_generator(const LindbladSpec& spec) {
  spec.validate();
  const int d = spec.dim;
  const Operator id = Operator::Identity(d, d);
  Eigen::MatrixXcd l = -kI * (sandwich(spec.hamiltonian, id) - sandwich(id, spec.hamiltonian));
  for (const auto& j : spec.jumps) {
    if (j.rate == 0.0) continue;
    const Operator lk_dag_lk = j.op.adjoint() * j.op;
    l += j.rate * (sandwich(j.op, j.op.adjoint()) - 0.5 * sandwich(lk_dag_lk, id) - 0.5 * sandwich(id, lk_dag_lk));
  }
  return Superoperator(d, std::move(l));
}

Superoperator adjoint_generator(const Superoperator& generator) {
  return Superoperator(generator.dim(), generator.matrix().adjoint());
}

Superoperator adjoint_generator_from_spec(const LindbladSpec& spec) {
  spec.validate();
  const int d = spec.dim;
  const Operator id = Operator::Identity(d, d);
  Eigen::MatrixXcd l = kI * (sandwich(spec.hamiltonian, id) - sandwich(id, spec.hamiltonian));
  for (const auto& j : spec.jumps) {
    if (j.rate == 0.0) continue;
    const Operator lk_dag_lk = j.op.adjoint() * j.op;
    l += j.rate * (sandwich(j.op.adjoint(), j.op) - 0.5 * sandwich(lk_dag_lk, id) - 0.5 * sandwich(id, lk_dag_lk));
  }
  return Superoperator(d, std::move(l));
}

Superoperator propagator(const Superoperator& generator, double t) {
  if (!std::isfinite(t)) throw Error("propagator: time must be finite");
  if (t == 0.0) return Superoperator::identity(generator.dim());
  return Superoperator(generator.dim(), expm_blockwise(t * generator.matrix()));
}

Operator apply(const Superoperator& map, const Operator& a) {
  if (a.rows() != map.dim() || a.cols() != map.dim()) throw DimensionError("apply: dimension mismatch");
  return unvectorize(map.matrix() * vectorize(a), map.dim());
}

double condition_estimate(const Superoperator& map, const Superoperator& inverse) {
  const double c = one_norm(map.matrix()) * one_norm(inverse.matrix());
  return std::isfinite(c) ? std::max(c, 1.0) : std::numeric_limits<double>::infinity();
}

InversePropagator inverse_propagator(const Superoperator& generator, double t, double cond_max) {
  if (!std::isfinite(t)) throw Error("inverse_propagator: time must be finite");
  double cond = std::numeric_limits<double>::infinity();
  Superoperator inverse;
  try {
    const Superoperator forward = propagator(generator, t);
    inverse = propagator(generator, -t);
    cond = condition_estimate(forward, inverse);
  } catch (const IllConditionedError&) {
    throw;
  } catch (const Error&) {
    // overflow inside the exponential: leave cond infinite
  }
  if (!(cond <= cond_max)) {
    std::ostringstream msg;
    msg << "inverse_propagator: condition estimate " << cond << " at t = " << t << " exceeds " << cond_max;
    throw IllConditionedError(msg.str(), cond, t);
  }
  return {std::move(inverse), cond};
}

PropagatorFamily::PropagatorFamily(Superoperator generator)
    : generator_(std::move(generator)), exponential_(generator_.matrix()) {}

Superoperator PropagatorFamily::at(double t) const {
  if (t == 0.0) return Superoperator::identity(generator_.dim());
  return Superoperator(generator_.dim(), exponential_.at(t));
}

Eigen::MatrixXcd choi_matrix(const Superoperator& map) {
  const int d = map.dim();
  Eigen::MatrixXcd choi = Eigen::MatrixXcd::Zero(d * d, d * d);
  for (int m = 0; m < d; ++m) {
    for (int n = 0; n < d; ++n) {
      choi.block(m * d, n * d, d, d) = qcontract::apply(map, matrix_unit(d, m, n));
    }
  }
  return choi;
}

CptpReport verify_cptp(const Superoperator& map, double tol) {
  const int d = map.dim();
  CptpReport r;
  for (int m = 0; m < d; ++m) {
    for (int n = 0; n < d; ++n) {
      const Operator image = qcontract::apply(map, matrix_unit(d, m, n));
      const Complex expected = (m == n) ? 1.0 : 0.0;
      r.trace_deviation = std::max(r.trace_deviation, std::abs(image.trace() - expected));
      const Operator mirror = qcontract::apply(map, matrix_unit(d, n, m));
      r.hermiticity_deviation = std::max(r.hermiticity_deviation, max_abs(mirror - image.adjoint()));
    }
  }
  const Eigen::MatrixXcd choi = choi_matrix(map);
  const Eigen::MatrixXcd herm = 0.5 * (choi + choi.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(herm, Eigen::EigenvaluesOnly);
  r.choi_min_eigenvalue = es.eigenvalues().minCoeff();

  const ComplexVector one = vectorize(Operator::Identity(d, d));
  r.unital_deviation = (map.matrix().adjoint() * one - one).cwiseAbs().maxCoeff();

  r.trace_preserving = r.trace_deviation <= tol;
  r.hermiticity_preserving = r.hermiticity_deviation <= tol;
  r.completely_positive = r.choi_min_eigenvalue >= -tol;
  r.unital_adjoint = r.unital_deviation <= tol;
  return r;
}

}  // namespace qcontract
