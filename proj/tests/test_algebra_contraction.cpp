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

#include "qcontract/algebra_contraction.hpp"
#include "qcontract/models.hpp"
#include "test_support.hpp"

using namespace qcontract;

namespace {

// Sets [e_i, e_j] = z and [e_j, e_i] = -z.
void set_bracket(StructureTensor& c, int i, int j, const std::vector<Complex>& z) {
  for (int k = 0; k < c.n; ++k) {
    c.at(k, i, j) = z[static_cast<std::size_t>(k)];
    c.at(k, j, i) = -z[static_cast<std::size_t>(k)];
  }
}

StructureTensor su2_pauli() {
  StructureTensor c(3, 0.0);
  const Complex i2 = 2.0 * kI;
  set_bracket(c, 0, 1, {0, 0, i2});
  set_bracket(c, 1, 2, {i2, 0, 0});
  set_bracket(c, 2, 0, {0, i2, 0});
  return c;
}

StructureTensor e2() {
  StructureTensor c(3, 0.0);
  const Complex i2 = 2.0 * kI;
  set_bracket(c, 1, 2, {i2, 0, 0});
  set_bracket(c, 2, 0, {0, i2, 0});
  return c;
}

StructureTensor sl2r() {
  StructureTensor c(3, 0.0);
  // h, e, f
  set_bracket(c, 0, 1, {0, 2, 0});
  set_bracket(c, 0, 2, {0, 0, -2});
  set_bracket(c, 1, 2, {1, 0, 0});
  return c;
}

StructureTensor iso11_with_center() {
  StructureTensor c(4, 0.0);
  // a, adag, N, I
  set_bracket(c, 0, 2, {1, 0, 0, 0});
  set_bracket(c, 1, 2, {0, -1, 0, 0});
  return c;
}

StructureTensor heisenberg() {
  StructureTensor c(3, 0.0);
  set_bracket(c, 0, 1, {0, 0, 1});
  return c;
}

// C' for the basis f_a = sum_i P_ia e_i.
StructureTensor change_basis(const StructureTensor& c, const Eigen::MatrixXd& p) {
  const int n = c.n;
  const Eigen::MatrixXd q = p.inverse();
  StructureTensor out(n, c.time);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int k = 0; k < n; ++k) {
        Complex s{0.0, 0.0};
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j)
            for (int m = 0; m < n; ++m) s += p(i, a) * p(j, b) * c.at(m, i, j) * q(k, m);
        out.at(k, a, b) = s;
      }
  return out;
}

}  // namespace

TEST_CASE("labels round-trip through strings") {
  for (auto l : {LieLabel::abelian, LieLabel::heisenberg, LieLabel::e2, LieLabel::iso11, LieLabel::su2_so3,
                 LieLabel::sl2r_so21, LieLabel::solvable_other, LieLabel::unclassified}) {
    CHECK(parse_lie_label(to_string(l)) == l);
  }
  CHECK_FALSE(parse_lie_label("so3").has_value());
}

TEST_CASE("su(2) from Pauli constants") {
  const StructureTensor c = su2_pauli();
  const Eigen::MatrixXd k = killing_form(c);
  CHECK((k + 8.0 * Eigen::MatrixXd::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-12);
  const LieClassification r = classify(c);
  CHECK(r.label == LieLabel::su2_so3);
  CHECK(r.killing_signature.negative == 3);
  CHECK(r.center_dim == 0);
  CHECK(r.derived_dim == 3);
  CHECK(r.jacobi_residual < 1e-12);
}

TEST_CASE("E(2) contraction") {
  const LieClassification r = classify(e2());
  CHECK(r.label == LieLabel::e2);
  CHECK(r.killing_signature.positive == 0);
  CHECK(r.killing_signature.negative == 1);
  CHECK(r.killing_signature.zero == 2);
  CHECK(r.center_dim == 0);
  CHECK(r.derived_dim == 2);
  const Eigen::MatrixXd k = killing_form(e2());
  CHECK(k(2, 2) == doctest::Approx(-8.0));
}

TEST_CASE("sl(2,R)") {
  const LieClassification r = classify(sl2r());
  CHECK(r.label == LieLabel::sl2r_so21);
  CHECK(r.killing_signature.positive == 2);
  CHECK(r.killing_signature.negative == 1);
}

TEST_CASE("ISO(1,1) after removing the center") {
  const StructureTensor c = iso11_with_center();
  const LieClassification r = classify(c);
  CHECK(r.label == LieLabel::iso11);
  CHECK(r.quotient_dim == 1);
  CHECK(r.center_dim == 1);
  CHECK(killing_form(c)(2, 2) == doctest::Approx(2.0));
  const auto z = center(c);
  REQUIRE(z.size() == 1);
  CHECK(std::abs(std::abs(z[0](3)) - 1.0) < 1e-12);
  const StructureTensor q = quotient(c, z);
  CHECK(q.n == 3);
  CHECK(classify(q).label == LieLabel::iso11);
}

TEST_CASE("heisenberg, abelian and solvable algebras") {
  const LieClassification h = classify(heisenberg());
  CHECK(h.label == LieLabel::heisenberg);
  CHECK(h.center_dim == 1);
  CHECK(h.derived_dim == 1);
  CHECK(h.killing_signature.zero == 3);

  const LieClassification a = classify(StructureTensor(4, 0.0));
  CHECK(a.label == LieLabel::abelian);
  CHECK(a.center_dim == 4);
  CHECK(a.killing_signature.zero == 4);

  StructureTensor s(2, 0.0);
  set_bracket(s, 0, 1, {0, 1});
  CHECK(classify(s).label == LieLabel::solvable_other);
}

TEST_CASE("a non-Lie tensor has a Jacobi defect") {
  StructureTensor c(3, 0.0);
  set_bracket(c, 0, 1, {0, 1, 0});
  set_bracket(c, 1, 2, {1, 0, 0});
  CHECK(jacobi_residual(c) > 0.1);
  CHECK(jacobi_residual(su2_pauli()) < 1e-12);
}

TEST_CASE("labels are invariant under basis changes and rescalings") {
  std::mt19937_64 rng(17);
  std::normal_distribution<double> g(0.0, 1.0);
  std::uniform_real_distribution<double> u(0.2, 5.0);
  const std::vector<std::pair<StructureTensor, LieLabel>> cases = {
      {su2_pauli(), LieLabel::su2_so3}, {e2(), LieLabel::e2},     {sl2r(), LieLabel::sl2r_so21},
      {heisenberg(), LieLabel::heisenberg}, {iso11_with_center(), LieLabel::iso11}};
  for (const auto& [c, label] : cases) {
    for (int trial = 0; trial < 20; ++trial) {
      Eigen::MatrixXd p(c.n, c.n);
      for (int i = 0; i < c.n; ++i)
        for (int j = 0; j < c.n; ++j) p(i, j) = g(rng);
      CHECK(classify(change_basis(c, p)).label == label);
      Eigen::MatrixXd d = Eigen::MatrixXd::Zero(c.n, c.n);
      for (int i = 0; i < c.n; ++i) d(i, i) = u(rng);
      CHECK(classify(change_basis(c, d)).label == label);
    }
  }
}

TEST_CASE("center vectors commute with every basis element") {
  const StructureTensor c = iso11_with_center();
  for (const auto& v : center(c)) {
    for (int j = 0; j < c.n; ++j) {
      double r = 0.0;
      for (int k = 0; k < c.n; ++k) {
        Complex s{0.0, 0.0};
        for (int i = 0; i < c.n; ++i) s += v(i) * c.at(k, i, j);
        r += std::norm(s);
      }
      CHECK(std::sqrt(r) < 1e-9);
    }
  }
  CHECK(derived_dimension(c) == 2);
}

TEST_CASE("kernel of the dephasing adjoint") {
  const ModelInstance m = qubit_phase_damping(1.0);
  const Superoperator adj = adjoint_generator(build_generator(m.spec));
  const KernelReport k = kernel_of_adjoint(adj);
  CHECK(k.kernel_dim == 2);
  CHECK(k.commutant_is_abelian);
  CHECK(k.closed_under_commutator);
  const OperatorBasis span({pauli(0), pauli(3)}, {"I", "Z"});
  for (const auto& op : k.kernel_basis) CHECK(expand_with_residual(op, span).residual < 1e-12);
  const PropagatorFamily family(adj);
  for (double t : {0.5, 3.0}) {
    for (const auto& op : k.kernel_basis) CHECK(testing::max_abs_diff(qcontract::apply(family.at(t), op), op) < 1e-8);
  }
}

TEST_CASE("kernel of pure decoherence") {
  const Superoperator pos = adjoint_generator(build_generator(pure_decoherence_d_level({0.5, 1.0, 2.0}).spec));
  const KernelReport k = kernel_of_adjoint(pos);
  CHECK(k.kernel_dim == 4);
  CHECK(k.commutant_is_abelian);
  // gamma = (0, 1, 0) on d = 4 leaves gamma_02 = gamma_13 = 0
  const Superoperator partial = adjoint_generator(build_generator(pure_decoherence_d_level({0.0, 1.0, 0.0}).spec));
  const KernelReport kp = kernel_of_adjoint(partial);
  CHECK(kp.kernel_dim == 8);
  CHECK(kp.closed_under_commutator);
  CHECK_FALSE(kp.commutant_is_abelian);
}
