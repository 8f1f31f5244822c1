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

// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/SVD>

#include "qcontract/algebra_contraction.hpp"
#include "qcontract/deformed_product.hpp"
#include "qcontract/errors.hpp"
#include "qcontract/lindblad.hpp"
#include "qcontract/models.hpp"
#include "test_support.hpp"

using namespace qcontract;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool passed = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      passed = false;
      detail << " [failed: " << what << "]";
    }
  }
};

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

double opnorm(const Eigen::MatrixXcd& a) {
  if (a.size() == 0) return 0.0;
  return Eigen::JacobiSVD<Eigen::MatrixXcd>(a).singularValues()(0);
}

Superoperator adjoint_of(const ModelInstance& m) { return adjoint_generator(build_generator(m.spec)); }

Operator unit_frobenius(Operator a) { return a / a.norm(); }

// Test-side decoherence factors: c_mn(t) = exp(-(t/d) sum_k gamma_k (1 - lambda^(-k(m-n)))).
Eigen::MatrixXcd reference_decoherence(const std::vector<double>& gammas, double t) {
  const int d = static_cast<int>(gammas.size()) + 1;
  Eigen::MatrixXcd c(d, d);
  for (int m = 0; m < d; ++m) {
    for (int n = 0; n < d; ++n) {
      Complex exponent = 0.0;
      for (int k = 1; k < d; ++k) {
        const double phase = -2.0 * std::numbers::pi * k * (m - n) / d;
        exponent += gammas[static_cast<std::size_t>(k - 1)] * (1.0 - std::polar(1.0, phase));
      }
      c(m, n) = std::exp(-t * exponent / static_cast<double>(d));
    }
  }
  return c;
}

std::vector<double> seeded_rates(int d, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.2, 2.0);
  std::vector<double> g(static_cast<std::size_t>(d - 1));
  for (auto& x : g) x = u(rng);
  return g;
}

double max_of(const std::vector<double>& v) { return *std::max_element(v.begin(), v.end()); }

Outcome qubit_decay() {
  Outcome o;
  const auto start = Clock::now();
  const Superoperator adj = adjoint_of(qubit_phase_damping(1.0));
  double worst = 0.0;
  for (double t : {0.1, 0.5, 1.0, 2.0, 5.0}) {
    const Operator got = qcontract::apply(propagator(adj, t), pauli(1));
    worst = std::max(worst, opnorm(got - std::exp(-t) * pauli(1)));
  }
  const double elapsed = seconds_since(start);
  o.detail << "max deviation " << worst << ", " << elapsed << " s";
  o.require(worst < 1e-10, "deviation");
  o.require(elapsed < 0.1, "runtime");
  return o;
}

Outcome qubit_structure_constants() {
  Outcome o;
  const ModelInstance m = qubit_phase_damping(1.0);
  const Superoperator adj = adjoint_of(m);
  double closed = 0.0, constant = 0.0;
  for (double t : {0.1, 0.5, 1.0, 2.0, 5.0}) {
    const StructureTensor c = structure_constants(DeformedAlgebraContext(adj, m.canonical_basis, t));
    closed = std::max(closed, std::abs(c.at(2, 0, 1) - 2.0 * kI * std::exp(-2.0 * t)));
    constant = std::max(constant, std::abs(c.at(0, 1, 2) - 2.0 * kI));
    constant = std::max(constant, std::abs(c.at(1, 0, 2) + 2.0 * kI));
  }
  o.detail << "C3_12 deviation " << closed << ", constant entries deviation " << constant;
  o.require(closed < 1e-9, "C3_12");
  o.require(constant < 1e-10, "C1_23 / C2_13");
  return o;
}

Outcome contraction_labels() {
  Outcome o;
  const std::vector<std::pair<std::string, LieLabel>> expected = {
      {"qubit-dephasing", LieLabel::e2},
      {"damped-oscillator", LieLabel::abelian},
      {"qubit-dephasing-h1", LieLabel::abelian},
      {"phase-damped-oscillator", LieLabel::iso11},
  };
  int matches = 0;
  for (const auto& [name, label] : expected) {
    const ModelInstance m = make_model(name);
    const Superoperator adj = adjoint_of(m);
    const auto times = default_schedule(adj, m.canonical_basis, m.gamma_ref);
    const LimitReport r = asymptotic_structure_constants(adj, m.canonical_basis, times);
    std::string got = "unclassified";
    if (r.converged && r.limit) got = to_string(classify(*r.limit).label);
    const bool ok = got == to_string(label);
    matches += ok ? 1 : 0;
    o.detail << " " << name << "=" << got << (ok ? "" : " (expected " + to_string(label) + ")") << ";";
    o.require(ok, name);
  }
  o.detail << " " << matches << "/4 exact";
  return o;
}

Outcome decoherence_matrix_check() {
  Outcome o;
  std::mt19937_64 rng(20240601);
  double worst = 0.0, closed = 0.0;
  for (int d = 2; d <= 5; ++d) {
    const std::vector<double> gammas = seeded_rates(d, rng);
    const ModelInstance m = pure_decoherence_d_level(gammas);
    const PropagatorFamily family(build_generator(m.spec));
    const DecoherenceMatrix dm = decoherence_matrix(gammas);
    for (double s : {0.5, 1.0, 3.0}) {
      const double t = s / max_of(gammas);
      const Superoperator lambda = family.at(t);
      const Eigen::MatrixXcd ref = reference_decoherence(gammas, t);
      closed = std::max(closed, (dm.at(t) - ref).cwiseAbs().maxCoeff());
      for (int a = 0; a < d; ++a) {
        for (int b = 0; b < d; ++b) {
          const Operator e = matrix_unit(d, a, b);
          worst = std::max(worst, max_abs(qcontract::apply(lambda, e) - dm.at(t)(a, b) * e));
        }
      }
    }
  }
  o.detail << "superoperator vs closed form " << worst << ", closed form vs reference " << closed;
  o.require(worst < 1e-9, "superoperator action");
  o.require(closed < 1e-12, "closed form");
  return o;
}

Outcome product_formula() {
  Outcome o;
  std::mt19937_64 rng(77);
  double equal = 0.0, general = 0.0;
  for (int d = 2; d <= 5; ++d) {
    const double gamma = 1.0;
    const Superoperator eq_adj = adjoint_of(pure_decoherence_d_level(std::vector<double>(d - 1, gamma)));
    const std::vector<double> gammas = seeded_rates(d, rng);
    const Superoperator gen_adj = adjoint_of(pure_decoherence_d_level(gammas));
    for (double s : {0.5, 1.0, 2.0}) {
      const double t = s / gamma;
      const DeformedProduct pe(eq_adj, t);
      const double tg = s / max_of(gammas);
      const DeformedProduct pg(gen_adj, tg);
      const Eigen::MatrixXcd c = reference_decoherence(gammas, tg);
      for (int m = 0; m < d; ++m)
        for (int n = 0; n < d; ++n)
          for (int k = 0; k < d; ++k)
            for (int l = 0; l < d; ++l) {
              const Operator a = matrix_unit(d, m, n), b = matrix_unit(d, k, l);
              const double expo = 1.0 + (m == l) - (m == n) - (k == l);
              const Operator want = n == k ? Operator(std::exp(-gamma * expo * t) * matrix_unit(d, m, l))
                                           : Operator(Operator::Zero(d, d));
              equal = std::max(equal, max_abs(pe.product(a, b) - want));
              const Operator want_g = n == k ? Operator(c(n, m) * c(l, k) / c(l, m) * matrix_unit(d, m, l))
                                             : Operator(Operator::Zero(d, d));
              general = std::max(general, max_abs(pg.product(a, b) - want_g));
            }
    }
  }
  o.detail << "equal-rate delta formula " << equal << ", general-rate ratio formula " << general;
  o.require(equal < 1e-8, "delta formula");
  o.require(general < 1e-8, "ratio formula");
  return o;
}

Outcome schwinger_relation() {
  Outcome o;
  double residual = 0.0, witness = std::numeric_limits<double>::infinity();
  for (int d : {2, 3, 5, 8}) {
    const Superoperator adj = adjoint_of(discrete_position_decoherence(1.0, d));
    const auto [u, v] = schwinger_pair(d);
    const Complex lambda = std::polar(1.0, 2.0 * std::numbers::pi / d);
    std::vector<Operator> up(static_cast<std::size_t>(d), Operator::Identity(d, d));
    std::vector<Operator> vp(static_cast<std::size_t>(d), Operator::Identity(d, d));
    for (int p = 1; p < d; ++p) {
      up[static_cast<std::size_t>(p)] = up[static_cast<std::size_t>(p - 1)] * u;
      vp[static_cast<std::size_t>(p)] = vp[static_cast<std::size_t>(p - 1)] * v;
    }
    for (double t : {0.25, 0.5, 1.0, 2.0, 4.0, 6.0}) {
      // The generator is diagonal on matrix units, so its inverse exponential is exact
      // even where the condition number exceeds the default refusal threshold.
      const DeformedProduct prod(adj, t, std::numeric_limits<double>::infinity());
      for (int k = 0; k < d; ++k)
        for (int l = 0; l < d; ++l) {
          const Operator& uk = up[static_cast<std::size_t>(k)];
          const Operator& vl = vp[static_cast<std::size_t>(l)];
          residual = std::max(residual, opnorm(prod.product(uk, vl) - std::pow(lambda, k * l) * prod.product(vl, uk)));
        }
      if (t >= 1.0) {
        const Operator fv = prod.forward(v);
        witness = std::min(witness, opnorm(fv * fv.adjoint() - Operator::Identity(d, d)));
      }
    }
  }
  o.detail << "max relation residual " << residual << ", min non-unitarity " << witness;
  o.require(residual < 1e-9, "relation");
  o.require(witness > 0.5, "non-unitarity");
  return o;
}

Outcome property_suite() {
  Outcome o;
  const auto start = Clock::now();
  std::mt19937_64 rng(4242);
  double duality = 0, semigroup = 0, unital = 0, herm = 0, iso = 0, assoc = 0, jacobi = 0, jacobi_scaled = 0;
  double choi = std::numeric_limits<double>::infinity();
  int deformed_times = 0;
  for (const auto& name : model_names()) {
    const ModelInstance m = make_model(name);
    const int d = m.spec.dim;
    const Superoperator gen = build_generator(m.spec);
    const Superoperator adj = adjoint_generator(gen);
    const auto family = std::make_shared<const PropagatorFamily>(adj);
    const PropagatorFamily forward(gen);
    const double g = m.gamma_ref;

    for (int p = 0; p < 200; ++p) {
      const Operator rho = testing::random_density(d, rng);
      const Operator a = unit_frobenius(testing::random_operator(d, rng));
      const Complex lhs = (qcontract::apply(gen, rho) * a).trace();
      const Complex rhs = (rho * qcontract::apply(adj, a)).trace();
      duality = std::max(duality, std::abs(lhs - rhs) / (rho.norm() * a.norm()));
    }

    const std::vector<double> grid = {0.0, 1.25, 2.5, 3.75, 5.0};
    for (double t : grid)
      for (double s : grid) {
        const double tt = t / g, ss = s / g;
        semigroup = std::max(semigroup, max_abs(forward.at(tt + ss).matrix() - forward.at(tt).matrix() * forward.at(ss).matrix()));
      }

    for (double s : {0.5, 1.0, 2.0, 4.0}) {
      const double t = s / g;
      const Superoperator lt = family->at(t);
      unital = std::max(unital, max_abs(qcontract::apply(lt, Operator::Identity(d, d)) - Operator::Identity(d, d)));
      for (int p = 0; p < 200; ++p) {
        const Operator h = testing::random_hermitian(d, rng);
        const Operator e = qcontract::apply(lt, h / h.norm());
        herm = std::max(herm, max_abs(e - e.adjoint()));
      }
      choi = std::min(choi, verify_cptp(forward.at(t)).choi_min_eigenvalue);

      DeformedOptions opts;
      opts.full_space = false;
      // The Jacobi sum is quadratic in C, so roundoff scales with max|C|^2 where entries grow.
      const StructureTensor c = structure_constants(DeformedAlgebraContext(adj, m.canonical_basis, t, opts, family));
      const double r = jacobi_residual(c);
      jacobi = std::max(jacobi, r);
      jacobi_scaled = std::max(jacobi_scaled, r / std::max(1.0, c.max_abs() * c.max_abs()));
    }

    for (double s : {0.05, 0.1, 0.25, 0.5, 1.0, 2.0, 4.0, 8.0}) {
      const double t = s / g;
      std::optional<DeformedProduct> prod;
      try {
        prod.emplace(*family, t, 1e5);
      } catch (const IllConditionedError&) {
        continue;
      }
      ++deformed_times;
      for (int p = 0; p < 200; ++p) {
        const Operator a = unit_frobenius(testing::random_operator(d, rng));
        const Operator b = unit_frobenius(testing::random_operator(d, rng));
        const Operator c = unit_frobenius(testing::random_operator(d, rng));
        const Operator ab = prod->product(a, b);
        iso = std::max(iso, opnorm(prod->forward(ab) - prod->forward(a) * prod->forward(b)));
        assoc = std::max(assoc, opnorm(prod->product(ab, c) - prod->product(a, prod->product(b, c))));
      }
    }
  }
  const double elapsed = seconds_since(start);
  o.detail << "duality " << duality << ", semigroup " << semigroup << ", unitality " << unital << ", hermiticity "
           << herm << ", isomorphism " << iso << ", associativity " << assoc << " (" << deformed_times
           << " conditioned times), jacobi " << jacobi << " (scaled " << jacobi_scaled << ")" << ", min choi eigenvalue " << choi << ", " << elapsed << " s";
  o.require(duality < 1e-10, "duality");
  o.require(semigroup < 1e-9, "semigroup");
  o.require(unital < 1e-10, "unitality");
  o.require(herm < 1e-10, "hermiticity");
  o.require(iso < 1e-9, "isomorphism");
  o.require(assoc < 1e-8, "associativity");
  o.require(jacobi_scaled < 1e-8, "jacobi");
  o.require(choi >= -1e-10, "choi");
  o.require(deformed_times >= 2 * static_cast<int>(model_names().size()), "conditioned deformed times");
  o.require(elapsed < 60.0, "runtime");
  return o;
}

bool in_span(const Operator& k, const std::vector<Operator>& span) {
  Eigen::MatrixXcd basis(k.size(), static_cast<Eigen::Index>(span.size()));
  for (std::size_t i = 0; i < span.size(); ++i) basis.col(static_cast<Eigen::Index>(i)) = span[i].reshaped();
  const Eigen::VectorXcd x = basis.colPivHouseholderQr().solve(k.reshaped().eval());
  return (basis * x - k.reshaped()).norm() < 1e-9 * k.norm();
}

Outcome kernel_criterion() {
  Outcome o;
  const KernelReport q = kernel_of_adjoint(adjoint_of(qubit_phase_damping(1.0)));
  bool q_span = q.kernel_dim == 2;
  for (const auto& k : q.kernel_basis) q_span = q_span && in_span(k, {Operator::Identity(2, 2), pauli(3)});
  o.require(q_span, "qubit kernel");

  const int d = 4;
  const KernelReport p = kernel_of_adjoint(adjoint_of(pure_decoherence_d_level({0.7, 1.3, 0.4})));
  std::vector<Operator> projectors;
  for (int m = 0; m < d; ++m) projectors.push_back(matrix_unit(d, m, m));
  bool p_span = p.kernel_dim == d;
  for (const auto& k : p.kernel_basis) p_span = p_span && in_span(k, projectors);
  o.require(p_span, "pure-decoherence kernel");

  // Only gamma_2 nonzero at d = 4: the rate of |m><n| vanishes whenever m - n is even.
  const KernelReport z = kernel_of_adjoint(adjoint_of(pure_decoherence_d_level({0.0, 1.0, 0.0})));
  o.require(z.kernel_dim > d, "vanishing-rate kernel");
  o.detail << "qubit dim " << q.kernel_dim << ", pure-decoherence dim " << p.kernel_dim
           << ", vanishing-rate dim " << z.kernel_dim;
  return o;
}

Outcome truncation() {
  Outcome o;
  const std::vector<double> times = {0.5, 1.0, 2.0, 4.0};
  for (const std::string name : {"damped-oscillator", "phase-damped-oscillator"}) {
    ModelParams small, large;
    small.n_max = 10;
    large.n_max = 20;
    const double e10 = max_oracle_deviation(make_model(name, small), times);
    const double e20 = max_oracle_deviation(make_model(name, large), times);
    const bool ok = e20 < 1e-10 || e20 * 10.0 <= e10;
    o.detail << " " << name << ": " << e10 << " -> " << e20 << ";";
    o.require(ok, name);
  }
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"qubit dephasing decay", qubit_decay},
      {"deformed commutator closed form", qubit_structure_constants},
      {"contraction labels", contraction_labels},
      {"decoherence matrix", decoherence_matrix_check},
      {"deformed product of matrix units", product_formula},
      {"clock-shift relation preservation", schwinger_relation},
      {"property suite", property_suite},
      {"kernel of the adjoint generator", kernel_criterion},
      {"truncation convergence", truncation},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.passed = false;
      o.detail << " exception: " << e.what();
    }
    failures += o.passed ? 0 : 1;
    std::printf("%s %zu %s: %s\n", o.passed ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), o.detail.str().c_str());
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
