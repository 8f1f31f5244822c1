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

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "qcontract/algebra_contraction.hpp"
#include "qcontract/lindblad.hpp"
#include "qcontract/operator_core.hpp"

namespace qcontract {

/// Pure-decoherence damping factors: Lambda_t(E_mn) = c_mn(t) E_mn with
/// c_mn(t) = exp(-(i omega_mn + gamma_mn) t).
struct DecoherenceMatrix {
  int d = 0;
  std::vector<double> gammas;
  /// gamma_mn = (1/d) sum_k gamma_k Re(1 - lambda^{-k(m-n)}).
  Eigen::MatrixXd rates;
  /// omega_mn = -(1/d) Im sum_k gamma_k lambda^{-k(m-n)} + h_m - h_n.
  Eigen::MatrixXd frequencies;

  Eigen::MatrixXcd at(double t) const;
};

/// `h` is an optional diagonal Hamiltonian sum_m h_m |m><m|.
DecoherenceMatrix decoherence_matrix(const std::vector<double>& gammas, const std::vector<double>& h = {});

/// c_nm(t) c_lk(t) / c_lm(t), the coefficient of E_mn E_kl in E_mn ._t E_kl.
Complex sixth_example_product_coefficient(const std::vector<double>& gammas, double t, int m, int n, int k, int l);

/// Closed form t -> L#_t(A) for one observable.
struct AdjointOracle {
  std::string label;
  Operator observable;
  std::function<Operator(double)> action;
};

/// Expected t -> infinity limit of L#_t(A).
struct WeakLimitOracle {
  std::string label;
  Operator observable;
  Operator limit;
};

/// Expected t -> infinity limit of Lambda_t(rho).
struct StateLimitOracle {
  std::string label;
  Operator initial;
  Operator limit;
};

struct ModelInstance {
  std::string name;
  std::string description;
  LindbladSpec spec;
  OperatorBasis canonical_basis;
  /// Direct formula for L rho, used to check the jump/rate encoding.
  std::function<Operator(const Operator&)> generator_formula;
  /// How the generator is written as jumps and rates.
  std::string encoding;
  std::vector<AdjointOracle> adjoint_oracles;
  std::vector<WeakLimitOracle> weak_limits;
  std::vector<StateLimitOracle> state_limits;
  std::optional<DecoherenceMatrix> decoherence;
  std::optional<LieLabel> expected_contraction;
  /// Largest jump rate; sets the time unit of schedules.
  double gamma_ref = 1.0;
  /// Asserts L = L# (phase-damped oscillator).
  bool self_dual = false;
};

struct ModelParams {
  double gamma = 1.0;
  /// Hamiltonian frequency; qubit models default to 1, oscillators to 0.
  std::optional<double> omega;
  int n_max = 20;
  int n_guard = 2;
  int d = 3;
  /// Rates gamma_1..gamma_{d-1}; empty means all equal to gamma.
  std::vector<double> rates;
  /// Diagonal Hamiltonian entries; empty means none.
  std::vector<double> h;
};

enum class QubitAxis { x3, x1 };

ModelInstance qubit_phase_damping(double gamma);
ModelInstance qubit_with_hamiltonian(double gamma, double omega, QubitAxis axis);
/// omega adds H = omega a^dag a.
ModelInstance damped_oscillator(double gamma, int n_max, int n_guard = 2, double omega = 0.0);
ModelInstance phase_damped_oscillator(double gamma, int n_max, int n_guard = 2, double omega = 0.0);
/// L rho = -gamma [X, [X, rho]], X = diag(1..d), plus optional diagonal H.
ModelInstance discrete_position_decoherence(double gamma, int d, const std::vector<double>& h = {});
/// L rho = -(1/d) sum_k gamma_k (rho - U_k rho U_k^dag), U_k = sum_l lambda^{-kl} P_l.
ModelInstance pure_decoherence_d_level(const std::vector<double>& gammas, const std::vector<double>& h = {});

/// U_k on C^d.
Operator decoherence_unitary(int d, int k);

const std::vector<std::string>& model_names();
/// Throws SpecError for unknown names or invalid parameters.
ModelInstance make_model(const std::string& name, const ModelParams& params = {});

/// Matrix of a linear map on d x d operators given as a function.
Eigen::MatrixXcd assemble_superoperator(int d, const std::function<Operator(const Operator&)>& map);

struct OracleCheck {
  std::string name;
  double deviation = 0.0;
  double tolerance = 0.0;
  bool passed = false;
};

struct VerifyReport {
  std::vector<OracleCheck> checks;
  bool passed = true;
  double max_deviation = 0.0;
};

/// Runs every attached oracle plus encoding and CPTP checks at
/// gamma_ref * t in `scaled_times`.
VerifyReport verify_model(const ModelInstance& model, const std::vector<double>& scaled_times = {0.5, 1.0, 2.0, 4.0});

/// Largest deviation of the adjoint oracles from the computed action,
/// compared on the interior block for truncated models.
double max_oracle_deviation(const ModelInstance& model, const std::vector<double>& scaled_times);

}  // namespace qcontract
