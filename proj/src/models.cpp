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

#include "qcontract/models.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "qcontract/deformed_product.hpp"
#include "qcontract/errors.hpp"

namespace qcontract {

namespace {

Complex root_of_unity(int d, long long power) {
  const long long r = ((power % d) + d) % d;
  return std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(r) / d);
}

void require_positive(double gamma, const char* what) {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) throw SpecError(std::string(what) + ": gamma must be positive");
}

void require_oscillator(int n_max, int n_guard, const char* what) {
  if (n_max < 4) throw SpecError(std::string(what) + ": n_max must be at least 4");
  if (n_guard < 0 || n_max - n_guard < 2) throw SpecError(std::string(what) + ": n_guard leaves no interior");
}

Operator diagonal(const std::vector<double>& values, int d) {
  Operator h = Operator::Zero(d, d);
  for (int m = 0; m < d && m < static_cast<int>(values.size()); ++m) h(m, m) = values[static_cast<std::size_t>(m)];
  return h;
}

OperatorBasis qubit_canonical_basis() {
  return OperatorBasis({pauli(1), pauli(2), pauli(3)}, {"sigma1", "sigma2", "sigma3"});
}

Operator bloch_state(double x1, double x2, double x3) {
  return 0.5 * (pauli(0) + x1 * pauli(1) + x2 * pauli(2) + x3 * pauli(3));
}

Operator projector(const ComplexVector& psi) { return psi * psi.adjoint(); }

// (sigma1, sigma2, sigma3) oracles shared by the qubit models.
void add_pauli_oracles(ModelInstance& m, std::function<Operator(double)> s1, std::function<Operator(double)> s2,
                       std::function<Operator(double)> s3) {
  m.adjoint_oracles.push_back({"sigma0", pauli(0), [](double) { return pauli(0); }});
  m.adjoint_oracles.push_back({"sigma1", pauli(1), std::move(s1)});
  m.adjoint_oracles.push_back({"sigma2", pauli(2), std::move(s2)});
  m.adjoint_oracles.push_back({"sigma3", pauli(3), std::move(s3)});
}

std::vector<Operator> oscillator_elements(int n_max) {
  const Operator a = annihilation(n_max);
  return {a, a.adjoint(), number_operator(n_max), Operator::Identity(n_max + 1, n_max + 1)};
}

OperatorBasis oscillator_basis(int n_max, int n_guard) {
  return OperatorBasis(oscillator_elements(n_max), {"a", "adag", "N", "I"}, n_max - n_guard);
}

void add_oscillator_oracles(ModelInstance& m, int n_max, double gamma, double omega, bool number_decays) {
  const auto el = oscillator_elements(n_max);
  const Operator a = el[0], ad = el[1], num = el[2], id = el[3];
  m.adjoint_oracles.push_back(
      {"a", a, [a, gamma, omega](double t) -> Operator { return std::exp(Complex(-gamma / 2.0, -omega) * t) * a; }});
  m.adjoint_oracles.push_back(
      {"adag", ad, [ad, gamma, omega](double t) -> Operator { return std::exp(Complex(-gamma / 2.0, omega) * t) * ad; }});
  if (number_decays) {
    m.adjoint_oracles.push_back({"N", num, [num, gamma](double t) -> Operator { return std::exp(-gamma * t) * num; }});
  } else {
    m.adjoint_oracles.push_back({"N", num, [num](double) { return num; }});
  }
  m.adjoint_oracles.push_back({"I", id, [id](double) { return id; }});
  const int d = n_max + 1;
  m.weak_limits.push_back({"a", a, Operator::Zero(d, d)});
  m.weak_limits.push_back({"adag", ad, Operator::Zero(d, d)});
  m.weak_limits.push_back({"N", num, number_decays ? Operator::Zero(d, d) : num});
  m.weak_limits.push_back({"I", id, id});
}

ComplexVector low_superposition(int d) {
  ComplexVector psi = ComplexVector::Zero(d);
  for (int n = 0; n < 3; ++n) psi(n) = 1.0 / std::sqrt(3.0);
  return psi;
}

}  // namespace

Eigen::MatrixXcd DecoherenceMatrix::at(double t) const {
  Eigen::MatrixXcd c(d, d);
  for (int m = 0; m < d; ++m)
    for (int n = 0; n < d; ++n) c(m, n) = std::exp(-Complex(rates(m, n), frequencies(m, n)) * t);
  return c;
}

DecoherenceMatrix decoherence_matrix(const std::vector<double>& gammas, const std::vector<double>& h) {
  if (gammas.empty()) throw SpecError("decoherence_matrix: need at least one rate");
  for (double g : gammas) {
    if (!(g >= 0.0) || !std::isfinite(g)) throw SpecError("decoherence_matrix: rates must be nonnegative");
  }
  DecoherenceMatrix out;
  out.d = static_cast<int>(gammas.size()) + 1;
  out.gammas = gammas;
  const int d = out.d;
  if (!h.empty() && static_cast<int>(h.size()) != d) throw SpecError("decoherence_matrix: h must have d entries");
  out.rates = Eigen::MatrixXd::Zero(d, d);
  out.frequencies = Eigen::MatrixXd::Zero(d, d);
  for (int m = 0; m < d; ++m) {
    for (int n = 0; n < d; ++n) {
      if (m == n) continue;
      Complex s{0.0, 0.0};
      double total = 0.0;
      for (int k = 1; k < d; ++k) {
        const double g = gammas[static_cast<std::size_t>(k - 1)];
        s += g * root_of_unity(d, -static_cast<long long>(k) * (m - n));
        total += g;
      }
      out.rates(m, n) = (total - s.real()) / d;
      out.frequencies(m, n) = -s.imag() / d;
      if (!h.empty()) out.frequencies(m, n) += h[static_cast<std::size_t>(m)] - h[static_cast<std::size_t>(n)];
    }
  }
  return out;
}

Complex sixth_example_product_coefficient(const std::vector<double>& gammas, double t, int m, int n, int k, int l) {
  const DecoherenceMatrix dm = decoherence_matrix(gammas);
  const int d = dm.d;
  for (int idx : {m, n, k, l}) {
    if (idx < 0 || idx >= d) throw DimensionError("sixth_example_product_coefficient: index out of range");
  }
  const Eigen::MatrixXcd c = dm.at(t);
  return c(n, m) * c(l, k) / c(l, m);
}

Operator decoherence_unitary(int d, int k) {
  Operator u = Operator::Zero(d, d);
  for (int l = 0; l < d; ++l) u(l, l) = root_of_unity(d, -static_cast<long long>(k) * l);
  return u;
}

Eigen::MatrixXcd assemble_superoperator(int d, const std::function<Operator(const Operator&)>& map) {
  Eigen::MatrixXcd s(d * d, d * d);
  for (int n = 0; n < d; ++n) {
    for (int m = 0; m < d; ++m) {
      // column-stacked index of E_mn
      s.col(n * d + m) = vectorize(map(matrix_unit(d, m, n)));
    }
  }
  return s;
}

ModelInstance qubit_phase_damping(double gamma) {
  require_positive(gamma, "qubit_phase_damping");
  ModelInstance m{.name = "qubit-dephasing",
                  .description = "qubit phase damping",
                  .spec = {2, Operator::Zero(2, 2), {{pauli(3), gamma / 2.0}}},
                  .canonical_basis = qubit_canonical_basis()};
  m.generator_formula = [gamma](const Operator& rho) -> Operator {
    return -(gamma / 2.0) * (rho - pauli(3) * rho * pauli(3));
  };
  m.encoding = "jump sigma3 with rate gamma/2";
  add_pauli_oracles(
      m, [gamma](double t) -> Operator { return std::exp(-gamma * t) * pauli(1); },
      [gamma](double t) -> Operator { return std::exp(-gamma * t) * pauli(2); },
      [](double) { return pauli(3); });
  m.weak_limits = {{"sigma1", pauli(1), Operator::Zero(2, 2)},
                   {"sigma2", pauli(2), Operator::Zero(2, 2)},
                   {"sigma3", pauli(3), pauli(3)}};
  m.state_limits = {{"bloch(0.3,-0.4,0.5)", bloch_state(0.3, -0.4, 0.5), bloch_state(0.0, 0.0, 0.5)}};
  m.expected_contraction = LieLabel::e2;
  m.gamma_ref = gamma;
  return m;
}

ModelInstance qubit_with_hamiltonian(double gamma, double omega, QubitAxis axis) {
  require_positive(gamma, "qubit_with_hamiltonian");
  if (!std::isfinite(omega)) throw SpecError("qubit_with_hamiltonian: omega must be finite");
  const bool x3 = axis == QubitAxis::x3;
  const Operator h = omega * pauli(x3 ? 3 : 1);
  ModelInstance m{.name = x3 ? "qubit-dephasing-h3" : "qubit-dephasing-h1",
                  .description = x3 ? "qubit phase damping with H = omega sigma3"
                                    : "qubit phase damping with H = omega sigma1",
                  .spec = {2, h, {{pauli(3), gamma / 2.0}}},
                  .canonical_basis = qubit_canonical_basis()};
  m.generator_formula = [gamma, h](const Operator& rho) -> Operator {
    return -kI * commutator(h, rho) - (gamma / 2.0) * (rho - pauli(3) * rho * pauli(3));
  };
  m.encoding = "jump sigma3 with rate gamma/2, Hamiltonian as given";
  m.gamma_ref = gamma;
  const Operator zero = Operator::Zero(2, 2);
  if (x3) {
    add_pauli_oracles(
        m,
        [gamma, omega](double t) -> Operator {
          return std::exp(-gamma * t) * (std::cos(2 * omega * t) * pauli(1) - std::sin(2 * omega * t) * pauli(2));
        },
        [gamma, omega](double t) -> Operator {
          return std::exp(-gamma * t) * (std::cos(2 * omega * t) * pauli(2) + std::sin(2 * omega * t) * pauli(1));
        },
        [](double) { return pauli(3); });
    m.weak_limits = {{"sigma1", pauli(1), zero}, {"sigma2", pauli(2), zero}, {"sigma3", pauli(3), pauli(3)}};
    m.state_limits = {{"bloch(0.3,-0.4,0.5)", bloch_state(0.3, -0.4, 0.5), bloch_state(0.0, 0.0, 0.5)}};
    m.expected_contraction = LieLabel::e2;
  } else {
    // (sigma2, sigma3) coefficients obey c' = M c with M = [[-gamma, 2 omega], [-2 omega, 0]].
    auto block = [gamma, omega](double t) {
      Eigen::Matrix2cd mm;
      mm << -gamma, 2 * omega, -2 * omega, 0.0;
      const Complex s = std::sqrt(Complex(gamma * gamma / 4.0 - 4 * omega * omega, 0.0));
      const Complex ch = std::cosh(s * t);
      const Complex sh = std::abs(s) < 1e-12 ? Complex(t, 0.0) : std::sinh(s * t) / s;
      Eigen::Matrix2cd e = ch * Eigen::Matrix2cd::Identity() + sh * (mm + gamma / 2.0 * Eigen::Matrix2cd::Identity());
      return Eigen::Matrix2cd(std::exp(-gamma * t / 2.0) * e);
    };
    add_pauli_oracles(
        m, [gamma](double t) -> Operator { return std::exp(-gamma * t) * pauli(1); },
        [block](double t) -> Operator {
          const auto e = block(t);
          return e(0, 0).real() * pauli(2) + e(1, 0).real() * pauli(3);
        },
        [block](double t) -> Operator {
          const auto e = block(t);
          return e(0, 1).real() * pauli(2) + e(1, 1).real() * pauli(3);
        });
    m.weak_limits = {{"sigma1", pauli(1), zero}, {"sigma2", pauli(2), zero}, {"sigma3", pauli(3), zero}};
    m.state_limits = {{"bloch(0.3,-0.4,0.5)", bloch_state(0.3, -0.4, 0.5), bloch_state(0.0, 0.0, 0.0)}};
    m.expected_contraction = LieLabel::abelian;
  }
  return m;
}

ModelInstance damped_oscillator(double gamma, int n_max, int n_guard, double omega) {
  require_positive(gamma, "damped_oscillator");
  require_oscillator(n_max, n_guard, "damped_oscillator");
  const Operator a = annihilation(n_max);
  const Operator num = number_operator(n_max);
  const int d = n_max + 1;
  ModelInstance m{.name = "damped-oscillator",
                  .description = "harmonic oscillator with energy damping, truncated Fock space",
                  .spec = {d, omega * num, {{a, gamma}}},
                  .canonical_basis = oscillator_basis(n_max, n_guard)};
  m.generator_formula = [a, num, gamma, omega](const Operator& rho) -> Operator {
    return -kI * omega * commutator(num, rho) - (gamma / 2.0) * (num * rho + rho * num - 2.0 * a * rho * a.adjoint());
  };
  m.encoding = "jump a with rate gamma, H = omega a^dag a";
  add_oscillator_oracles(m, n_max, gamma, omega, true);
  Operator ground = Operator::Zero(d, d);
  ground(0, 0) = 1.0;
  m.state_limits = {{"(|0>+|1>+|2>)/sqrt3", projector(low_superposition(d)), ground}};
  m.expected_contraction = LieLabel::abelian;
  m.gamma_ref = gamma;
  return m;
}

ModelInstance phase_damped_oscillator(double gamma, int n_max, int n_guard, double omega) {
  require_positive(gamma, "phase_damped_oscillator");
  require_oscillator(n_max, n_guard, "phase_damped_oscillator");
  const Operator num = number_operator(n_max);
  const int d = n_max + 1;
  ModelInstance m{.name = "phase-damped-oscillator",
                  .description = "harmonic oscillator with phase damping, truncated Fock space",
                  .spec = {d, omega * num, {{num, gamma}}},
                  .canonical_basis = oscillator_basis(n_max, n_guard)};
  m.generator_formula = [num, gamma, omega](const Operator& rho) -> Operator {
    const Operator n2 = num * num;
    return -kI * omega * commutator(num, rho) - (gamma / 2.0) * (n2 * rho + rho * n2 - 2.0 * num * rho * num);
  };
  m.encoding = "jump a^dag a with rate gamma, H = omega a^dag a";
  add_oscillator_oracles(m, n_max, gamma, omega, false);
  const Operator rho0 = projector(low_superposition(d));
  m.state_limits = {{"(|0>+|1>+|2>)/sqrt3", rho0, Operator(rho0.diagonal().asDiagonal())}};
  m.expected_contraction = LieLabel::iso11;
  m.gamma_ref = gamma;
  m.self_dual = omega == 0.0;
  return m;
}

ModelInstance discrete_position_decoherence(double gamma, int d, const std::vector<double>& h) {
  require_positive(gamma, "discrete_position_decoherence");
  if (d < 2) throw SpecError("discrete_position_decoherence: d must be at least 2");
  if (!h.empty() && static_cast<int>(h.size()) != d) throw SpecError("discrete_position_decoherence: h must have d entries");
  Operator x = Operator::Zero(d, d);
  for (int m = 0; m < d; ++m) x(m, m) = m + 1.0;
  const Operator ham = diagonal(h, d);
  ModelInstance m{.name = "discrete-position",
                  .description = "decoherence in the discrete position basis on a circle",
                  .spec = {d, ham, {{x, 2.0 * gamma}}},
                  .canonical_basis = weyl_basis(d)};
  m.generator_formula = [x, ham, gamma](const Operator& rho) -> Operator {
    return -kI * commutator(ham, rho) - gamma * commutator(x, commutator(x, rho));
  };
  m.encoding = "Hermitian jump X = diag(1..d) with rate 2 gamma";
  m.gamma_ref = gamma;

  const auto [u, v] = schwinger_pair(d);
  Eigen::VectorXd hv = Eigen::VectorXd::Zero(d);
  for (int i = 0; i < d && i < static_cast<int>(h.size()); ++i) hv(i) = h[static_cast<std::size_t>(i)];
  Operator uk = Operator::Identity(d, d);
  Operator vl = Operator::Identity(d, d);
  for (int k = 1; k < d; ++k) {
    uk = uk * u;
    m.adjoint_oracles.push_back({"U" + std::to_string(k), uk, [uk](double) { return uk; }});
    m.weak_limits.push_back({"U" + std::to_string(k), uk, uk});
  }
  for (int l = 1; l < d; ++l) {
    vl = vl * v;
    // V^l moves |m> to |m+l>; entries that wrap around the circle sit at
    // distance d - l instead of l.
    Operator plain = Operator::Zero(d, d), wrapped = Operator::Zero(d, d);
    for (int c = 0; c < d; ++c) {
      for (int r = 0; r < d; ++r) {
        if (r - c == l) plain(r, c) = vl(r, c);
        if (r - c == l - d) wrapped(r, c) = vl(r, c);
      }
    }
    const double dl = d - l;
    m.adjoint_oracles.push_back({"V" + std::to_string(l), vl, [plain, wrapped, hv, gamma, l, dl](double t) -> Operator {
                                   const auto phase = (kI * t * hv.cast<Complex>()).array().exp().matrix();
                                   const Operator core =
                                       std::exp(-gamma * l * l * t) * plain + std::exp(-gamma * dl * dl * t) * wrapped;
                                   return phase.asDiagonal() * core * phase.conjugate().asDiagonal();
                                 }});
    m.weak_limits.push_back({"V" + std::to_string(l), vl, Operator::Zero(d, d)});
  }
  const ComplexVector psi = ComplexVector::Constant(d, 1.0 / std::sqrt(static_cast<double>(d)));
  m.state_limits = {{"uniform superposition", projector(psi), Operator::Identity(d, d) / d}};
  return m;
}

ModelInstance pure_decoherence_d_level(const std::vector<double>& gammas, const std::vector<double>& h) {
  const DecoherenceMatrix dm = decoherence_matrix(gammas, h);
  const int d = dm.d;
  std::vector<Jump> jumps;
  for (int k = 1; k < d; ++k) jumps.push_back({decoherence_unitary(d, k), gammas[static_cast<std::size_t>(k - 1)] / d});
  const Operator ham = diagonal(h, d);
  ModelInstance m{.name = "pure-decoherence",
                  .description = "pure decoherence of a d-level system by phase unitaries",
                  .spec = {d, ham, std::move(jumps)},
                  .canonical_basis = matrix_unit_basis(d)};
  m.generator_formula = [gammas, ham, d](const Operator& rho) -> Operator {
    Operator out = -kI * commutator(ham, rho);
    for (int k = 1; k < d; ++k) {
      const Operator u = decoherence_unitary(d, k);
      out -= (gammas[static_cast<std::size_t>(k - 1)] / d) * (rho - u * rho * u.adjoint());
    }
    return out;
  };
  m.encoding = "unitary jumps U_k with rates gamma_k/d";
  m.gamma_ref = *std::max_element(gammas.begin(), gammas.end());
  if (m.gamma_ref <= 0.0) m.gamma_ref = 1.0;
  m.decoherence = dm;
  bool all_decay = true;
  for (int r = 0; r < d; ++r) {
    for (int c = 0; c < d; ++c) {
      const Operator e = matrix_unit(d, r, c);
      const std::string label = "E" + std::to_string(r) + "_" + std::to_string(c);
      m.adjoint_oracles.push_back({label, e, [dm, e, r, c](double t) -> Operator {
                                     return std::exp(-Complex(dm.rates(c, r), dm.frequencies(c, r)) * t) * e;
                                   }});
      if (r == c) {
        m.weak_limits.push_back({label, e, e});
      } else if (dm.rates(r, c) > 0.0) {
        m.weak_limits.push_back({label, e, Operator::Zero(d, d)});
      } else {
        all_decay = false;
      }
    }
  }
  if (all_decay) {
    const ComplexVector psi = ComplexVector::Constant(d, 1.0 / std::sqrt(static_cast<double>(d)));
    m.state_limits = {{"uniform superposition", projector(psi), Operator::Identity(d, d) / d}};
  }
  return m;
}

const std::vector<std::string>& model_names() {
  static const std::vector<std::string> names = {"qubit-dephasing",  "qubit-dephasing-h3",      "qubit-dephasing-h1",
                                                 "damped-oscillator", "phase-damped-oscillator", "discrete-position",
                                                 "pure-decoherence"};
  return names;
}

ModelInstance make_model(const std::string& name, const ModelParams& p) {
  if (name == "qubit-dephasing") return qubit_phase_damping(p.gamma);
  if (name == "qubit-dephasing-h3") return qubit_with_hamiltonian(p.gamma, p.omega.value_or(1.0), QubitAxis::x3);
  if (name == "qubit-dephasing-h1") return qubit_with_hamiltonian(p.gamma, p.omega.value_or(1.0), QubitAxis::x1);
  if (name == "damped-oscillator") return damped_oscillator(p.gamma, p.n_max, p.n_guard, p.omega.value_or(0.0));
  if (name == "phase-damped-oscillator") {
    return phase_damped_oscillator(p.gamma, p.n_max, p.n_guard, p.omega.value_or(0.0));
  }
  if (name == "discrete-position") return discrete_position_decoherence(p.gamma, p.d, p.h);
  if (name == "pure-decoherence") {
    if (p.d < 2) throw SpecError("pure-decoherence: d must be at least 2");
    std::vector<double> rates = p.rates;
    if (rates.empty()) {
      require_positive(p.gamma, "pure-decoherence");
      rates.assign(static_cast<std::size_t>(p.d - 1), p.gamma);
    }
    return pure_decoherence_d_level(rates, p.h);
  }
  throw SpecError("unknown model '" + name + "'");
}

namespace {

void record(VerifyReport& report, std::string name, double deviation, double tolerance) {
  const bool ok = std::isfinite(deviation) && deviation <= tolerance;
  report.checks.push_back({std::move(name), deviation, tolerance, ok});
  report.passed = report.passed && ok;
  report.max_deviation = std::max(report.max_deviation, deviation);
}

double max_entry(const Eigen::MatrixXcd& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

}  // namespace

double max_oracle_deviation(const ModelInstance& model, const std::vector<double>& scaled_times) {
  const PropagatorFamily family(adjoint_generator(build_generator(model.spec)));
  double worst = 0.0;
  for (double s : scaled_times) {
    const double t = s / model.gamma_ref;
    const Superoperator map = family.at(t);
    for (const auto& o : model.adjoint_oracles) {
      const Operator diff = qcontract::apply(map, o.observable) - o.action(t);
      worst = std::max(worst, max_entry(model.canonical_basis.project(diff)));
    }
  }
  return worst;
}

VerifyReport verify_model(const ModelInstance& model, const std::vector<double>& scaled_times) {
  VerifyReport report;
  model.spec.validate();
  const int d = model.spec.dim;
  const Superoperator gen = build_generator(model.spec);
  const double scale = std::max(1.0, max_entry(gen.matrix()));

  if (model.generator_formula) {
    const Eigen::MatrixXcd direct = assemble_superoperator(d, model.generator_formula);
    record(report, "encoding", max_entry(gen.matrix() - direct), 1e-12 * scale);
  }
  const Superoperator adj = adjoint_generator(gen);
  record(report, "adjoint-from-spec", max_entry(adj.matrix() - adjoint_generator_from_spec(model.spec).matrix()),
         1e-12 * scale);
  if (model.self_dual) record(report, "self-dual", max_entry(gen.matrix() - adj.matrix()), 1e-12 * scale);

  const PropagatorFamily family(adj);
  std::vector<double> oracle_dev(model.adjoint_oracles.size(), 0.0);
  double trace_dev = 0.0, unital_dev = 0.0, herm_dev = 0.0, choi_neg = 0.0, deco_dev = 0.0;
  for (double s : scaled_times) {
    const double t = s / model.gamma_ref;
    const Superoperator map = family.at(t);
    for (std::size_t i = 0; i < model.adjoint_oracles.size(); ++i) {
      const auto& o = model.adjoint_oracles[i];
      const Operator diff = qcontract::apply(map, o.observable) - o.action(t);
      oracle_dev[i] = std::max(oracle_dev[i], max_entry(model.canonical_basis.project(diff)));
    }
    const Superoperator forward(d, map.matrix().adjoint());
    const CptpReport c = verify_cptp(forward);
    trace_dev = std::max(trace_dev, c.trace_deviation);
    unital_dev = std::max(unital_dev, c.unital_deviation);
    herm_dev = std::max(herm_dev, c.hermiticity_deviation);
    choi_neg = std::max(choi_neg, -c.choi_min_eigenvalue);
    if (model.decoherence) {
      const Eigen::MatrixXcd cm = model.decoherence->at(t);
      for (int m = 0; m < d; ++m) {
        for (int n = 0; n < d; ++n) {
          const Operator e = matrix_unit(d, m, n);
          deco_dev = std::max(deco_dev, max_entry(qcontract::apply(forward, e) - cm(m, n) * e));
        }
      }
    }
  }
  for (std::size_t i = 0; i < model.adjoint_oracles.size(); ++i) {
    const double size = std::max(1.0, max_entry(model.adjoint_oracles[i].observable));
    record(report, "adjoint:" + model.adjoint_oracles[i].label, oracle_dev[i], 1e-9 * size);
  }
  record(report, "trace-preserving", trace_dev, 1e-10);
  record(report, "unital-adjoint", unital_dev, 1e-10);
  record(report, "hermiticity-preserving", herm_dev, 1e-10);
  record(report, "choi-positive", std::max(0.0, choi_neg), 1e-10);
  if (model.decoherence) record(report, "decoherence-matrix", deco_dev, 1e-9);

  std::vector<double> schedule;
  std::vector<Superoperator> maps;
  for (int i = 1; i <= 6; ++i) {
    schedule.push_back(8.0 * i / model.gamma_ref);
    maps.push_back(family.at(schedule.back()));
  }
  auto orbit_limit = [&](const Operator& a, bool states) {
    std::vector<Operator> orbit;
    for (const auto& map : maps) {
      orbit.push_back(states ? Operator(unvectorize(map.matrix().adjoint() * vectorize(a), d))
                             : qcontract::apply(map, a));
    }
    return limit_of_orbit(schedule, orbit, 1e-8);
  };
  for (const auto& w : model.weak_limits) {
    const WeakLimit wl = orbit_limit(w.observable, false);
    const double dev = wl.limit ? max_entry(model.canonical_basis.project(*wl.limit - w.limit))
                                : std::numeric_limits<double>::infinity();
    record(report, "weak-limit:" + w.label, dev, 1e-6);
  }
  for (const auto& st : model.state_limits) {
    const WeakLimit wl = orbit_limit(st.initial, true);
    const double dev = wl.limit ? max_entry(*wl.limit - st.limit) : std::numeric_limits<double>::infinity();
    record(report, "state-limit:" + st.label, dev, 1e-6);
  }
  return report;
}

}  // namespace qcontract
