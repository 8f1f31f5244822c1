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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numbers>

#include "qcontract/errors.hpp"
#include "qcontract/operator_core.hpp"
#include "test_support.hpp"

using namespace qcontract;

namespace {

Complex lambda(int d, int power) { return std::polar(1.0, 2.0 * std::numbers::pi * power / d); }

Operator power(const Operator& a, int k) {
  Operator out = Operator::Identity(a.rows(), a.cols());
  for (int i = 0; i < k; ++i) out = out * a;
  return out;
}

}  // namespace

TEST_CASE("pauli matrices obey the su(2) relations") {
  const Operator id = Operator::Identity(2, 2);
  for (int a = 1; a <= 3; ++a) CHECK(testing::max_abs_diff(pauli(a) * pauli(a), id) < 1e-15);
  CHECK(testing::max_abs_diff(commutator(pauli(1), pauli(2)), 2.0 * kI * pauli(3)) < 1e-15);
  CHECK(testing::max_abs_diff(commutator(pauli(2), pauli(3)), 2.0 * kI * pauli(1)) < 1e-15);
  CHECK(testing::max_abs_diff(commutator(pauli(3), pauli(1)), 2.0 * kI * pauli(2)) < 1e-15);
  const OperatorBasis b = pauli_basis();
  CHECK(b.orthogonal());
  CHECK(b.labels()[3] == "sigma3");
  CHECK(std::abs(hs_inner(pauli(1), pauli(1)) - Complex(2.0, 0.0)) < 1e-15);
}

TEST_CASE("commutator rejects mismatched dimensions") {
  CHECK_THROWS_AS(commutator(Operator::Identity(2, 2), Operator::Identity(3, 3)), DimensionError);
}

TEST_CASE("matrix units multiply as E_mn E_kl = delta_nk E_ml") {
  const int d = 4;
  for (int m = 0; m < d; ++m)
    for (int n = 0; n < d; ++n)
      for (int k = 0; k < d; ++k)
        for (int l = 0; l < d; ++l) {
          const Operator p = matrix_unit(d, m, n) * matrix_unit(d, k, l);
          const Operator expected = n == k ? matrix_unit(d, m, l) : Operator::Zero(d, d);
          CHECK(testing::max_abs_diff(p, expected) == 0.0);
        }
  const OperatorBasis b = matrix_unit_basis(3);
  CHECK(b.size() == 9);
  CHECK(b.labels()[1] == "E0_1");
  CHECK(b.orthogonal());
}

TEST_CASE("schwinger pair satisfies the Weyl relation") {
  for (int d : {2, 3, 5, 8}) {
    const auto [u, v] = schwinger_pair(d);
    const Operator id = Operator::Identity(d, d);
    CHECK(testing::max_abs_diff(u * u.adjoint(), id) < 1e-12);
    CHECK(testing::max_abs_diff(v * v.adjoint(), id) < 1e-12);
    CHECK(testing::max_abs_diff(power(u, d), id) < 1e-12);
    CHECK(testing::max_abs_diff(power(v, d), id) < 1e-12);
    for (int k = 0; k <= d; ++k) {
      for (int l = 0; l <= d; ++l) {
        const Operator lhs = power(u, k) * power(v, l);
        const Operator rhs = lambda(d, k * l) * power(v, l) * power(u, k);
        CHECK(testing::max_abs_diff(lhs, rhs) < 1e-12);
      }
    }
  }
}

TEST_CASE("shift operator moves position labels forward") {
  const auto [u, v] = schwinger_pair(3);
  CHECK(testing::max_abs_diff(u * v * u.adjoint() * v.adjoint(), lambda(3, 1) * Operator::Identity(3, 3)) < 1e-12);
  Operator shift = Operator::Zero(3, 3);
  shift(1, 0) = shift(2, 1) = shift(0, 2) = 1.0;
  CHECK(testing::max_abs_diff(v, shift) < 1e-12);
}

TEST_CASE("weyl basis is orthogonal with norm d") {
  const int d = 4;
  const OperatorBasis w = weyl_basis(d);
  CHECK(w.size() == d * d);
  CHECK(w.orthogonal());
  for (int i = 0; i < w.size(); ++i) CHECK(std::abs(hs_inner(w[i], w[i]) - Complex(d, 0)) < 1e-12);
}

TEST_CASE("truncated ladder operators") {
  const int n = 6;
  const Operator a = annihilation(n);
  CHECK(std::abs(a(2, 3) - std::sqrt(3.0)) < 1e-15);
  CHECK(testing::max_abs_diff(a.adjoint() * a, number_operator(n)) < 1e-14);
  Operator defect = Operator::Identity(n + 1, n + 1);
  defect(n, n) -= n + 1.0;
  CHECK(testing::max_abs_diff(commutator(a, a.adjoint()), defect) < 1e-14);
  CHECK(testing::max_abs_diff(commutator(a, number_operator(n)), a) < 1e-14);
}

TEST_CASE("expansion recovers coefficients and reports residuals") {
  std::mt19937_64 rng(11);
  const OperatorBasis b = pauli_basis();
  ComplexVector c(4);
  c << Complex(1, 2), Complex(-0.5, 0), Complex(0, 3), Complex(0.25, -1);
  const ComplexVector got = expand_in_basis(b.combine(c), b);
  CHECK((got - c).cwiseAbs().maxCoeff() < 1e-14);

  const OperatorBasis partial({pauli(1), pauli(2)}, {"x", "y"});
  const Expansion e = expand_with_residual(pauli(3), partial);
  CHECK(e.residual == doctest::Approx(std::sqrt(2.0)));
  CHECK_THROWS_AS(expand_in_basis(pauli(3), partial), ExpansionError);

  // non-orthogonal but independent basis
  const OperatorBasis skew({pauli(0), pauli(0) + pauli(3), pauli(1) + 0.5 * pauli(3), pauli(2)}, {"a", "b", "c", "d"});
  CHECK_FALSE(skew.orthogonal());
  const Operator x = testing::random_operator(2, rng);
  CHECK(testing::max_abs_diff(skew.combine(expand_in_basis(x, skew)), x) < 1e-13);
}

TEST_CASE("dependent families are rejected") {
  CHECK_THROWS_AS(OperatorBasis({pauli(1), 2.0 * pauli(1)}, {"a", "b"}), BasisError);
  CHECK_THROWS_AS(OperatorBasis({pauli(1), Operator::Identity(3, 3)}, {"a", "b"}), DimensionError);
}

TEST_CASE("interior projection ignores the truncation boundary") {
  const int n = 8;
  const Operator a = annihilation(n);
  const OperatorBasis b({a, a.adjoint(), number_operator(n), Operator::Identity(n + 1, n + 1)}, {"a", "adag", "N", "I"},
                        n - 2);
  const ComplexVector c = expand_in_basis(commutator(a, a.adjoint()), b);
  CHECK(std::abs(c(3) - Complex(1.0, 0.0)) < 1e-13);
  CHECK(c.head(3).cwiseAbs().maxCoeff() < 1e-13);
  CHECK(b.find("N").value() == 2);
  CHECK_FALSE(b.find("x").has_value());
}
