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

#include "qcontract/deformed_product.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "qcontract/errors.hpp"

namespace qcontract {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double one_norm(const Eigen::MatrixXcd& a) { return a.cwiseAbs().colwise().sum().maxCoeff(); }

std::optional<Eigen::MatrixXcd> restrict_to_span(const Superoperator& adjoint, const OperatorBasis& basis,
                                                 double tol) {
  if (adjoint.dim() != basis.dim()) throw DimensionError("deformed algebra: generator and basis dimensions differ");
  const OperatorBasis plain(basis.elements(), basis.labels());
  const int n = basis.size();
  Eigen::MatrixXcd g(n, n);
  for (int i = 0; i < n; ++i) {
    const Operator image = qcontract::apply(adjoint, basis[i]);
    const Expansion e = expand_with_residual(image, plain);
    if (e.residual > tol * (image.norm() + basis[i].norm())) return std::nullopt;
    g.col(i) = e.coefficients;
  }
  return g;
}

// exp(tG) and exp(-tG) with their 1-norm condition number.
struct CoefficientPropagator {
  Eigen::MatrixXcd forward;
  Eigen::MatrixXcd backward;
  double condition = kInf;
};

CoefficientPropagator exponentiate(const Eigen::MatrixXcd& g, double t) {
  CoefficientPropagator out;
  try {
    out.forward = expm_pade(t * g);
    out.backward = expm_pade(-t * g);
    const double c = one_norm(out.forward) * one_norm(out.backward);
    out.condition = std::isfinite(c) ? std::max(1.0, c) : kInf;
  } catch (const Error&) {
    out.condition = kInf;
  }
  return out;
}

[[noreturn]] void refuse(double cond, double t, double cond_max) {
  std::ostringstream msg;
  msg << "deformed product refused at t = " << t << ": condition estimate " << cond << " exceeds " << cond_max;
  throw IllConditionedError(msg.str(), cond, t);
}

bool uniform(std::span<const double> t) {
  for (std::size_t i = 2; i < t.size(); ++i) {
    const double h1 = t[i - 1] - t[i - 2];
    const double h2 = t[i] - t[i - 1];
    if (std::abs(h2 - h1) > 1e-9 * std::max(std::abs(h1), std::abs(h2))) return false;
  }
  return true;
}

std::optional<Complex> aitken(Complex x0, Complex x1, Complex x2) {
  const Complex d1 = x1 - x0;
  const Complex d2 = x2 - x1;
  if (d1 == Complex{} && d2 == Complex{}) return x2;
  const Complex den = d2 - d1;
  if (std::abs(den) <= 1e-14 * std::max(std::abs(d1), std::abs(d2))) return std::nullopt;
  const Complex a = x2 - d2 * d2 / den;
  if (!std::isfinite(a.real()) || !std::isfinite(a.imag())) return std::nullopt;
  return a;
}

double slope(std::span<const double> xs, std::span<const double> ys) {
  const std::size_t n = xs.size();
  if (n < 2) return 0.0;
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  return sxx > 0.0 ? sxy / sxx : 0.0;
}

}  // namespace

double StructureTensor::antisymmetry_defect() const {
  double worst = 0.0;
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) worst = std::max(worst, std::abs(at(k, i, j) + at(k, j, i)));
  return worst;
}

double StructureTensor::max_abs() const {
  double worst = 0.0;
  for (const auto& v : values) worst = std::max(worst, std::abs(v));
  return worst;
}

DeformedProduct::DeformedProduct(const Superoperator& adjoint, double t, double cond_max) : time_(t) {
  if (!std::isfinite(t)) throw Error("DeformedProduct: time must be finite");
  try {
    forward_ = propagator(adjoint, t);
    backward_ = propagator(adjoint, -t);
    condition_ = condition_estimate(forward_, backward_);
  } catch (const Error&) {
    condition_ = kInf;
  }
  check_condition(cond_max);
}

DeformedProduct::DeformedProduct(const PropagatorFamily& adjoint_family, double t, double cond_max) : time_(t) {
  if (!std::isfinite(t)) throw Error("DeformedProduct: time must be finite");
  try {
    forward_ = adjoint_family.at(t);
    backward_ = adjoint_family.at(-t);
    condition_ = condition_estimate(forward_, backward_);
  } catch (const Error&) {
    condition_ = kInf;
  }
  check_condition(cond_max);
}

void DeformedProduct::check_condition(double cond_max) {
  if (!(condition_ <= cond_max)) refuse(condition_, time_, cond_max);
}

Operator DeformedProduct::product(const Operator& a, const Operator& b) const {
  return backward(forward(a) * forward(b));
}

Operator DeformedProduct::commutator(const Operator& a, const Operator& b) const {
  return backward(qcontract::commutator(forward(a), forward(b)));
}

DeformedAlgebraContext::DeformedAlgebraContext(const Superoperator& adjoint, OperatorBasis basis, double t,
                                               const DeformedOptions& options,
                                               std::shared_ptr<const PropagatorFamily> family)
    : adjoint_(adjoint), basis_(std::move(basis)), time_(t), options_(options) {
  if (!std::isfinite(t) || t < 0.0) throw Error("DeformedAlgebraContext: time must be finite and nonnegative");
  restricted_generator_ = restrict_to_span(adjoint_, basis_, options_.tol_invariance);
  if (restricted_generator_) {
    CoefficientPropagator p = exponentiate(*restricted_generator_, t);
    if (!(p.condition <= options_.cond_max)) refuse(p.condition, t, options_.cond_max);
    image_ = std::move(p.forward);
    inverse_image_ = std::move(p.backward);
    condition_ = p.condition;
  }
  if (options_.full_space || !restricted_generator_) {
    if (family) {
      full_.emplace(*family, t, options_.cond_max);
    } else {
      full_.emplace(adjoint_, t, options_.cond_max);
    }
    if (!restricted_generator_) condition_ = full_->condition();
  }
}

const DeformedProduct& DeformedAlgebraContext::full() const {
  if (!full_) throw Error("DeformedAlgebraContext: built without full-space propagators");
  return *full_;
}

Operator DeformedAlgebraContext::evolved_element(int i) const {
  if (image_) return basis_.combine(image_->col(i));
  return full_->forward(basis_[i]);
}

StructureTensor DeformedAlgebraContext::basis_table(bool commute) const {
  const int n = basis_.size();
  StructureTensor table(n, time_);
  std::vector<Operator> images;
  if (image_) {
    for (int i = 0; i < n; ++i) images.push_back(evolved_element(i));
  }
  const double amplification = std::max(1.0, condition_ * 1e-6);
  for (int i = 0; i < n; ++i) {
    for (int j = commute ? i + 1 : 0; j < n; ++j) {
      Operator x;
      double scale = 0.0;
      if (image_) {
        x = commute ? qcontract::commutator(images[i], images[j]) : Operator(images[i] * images[j]);
        scale = images[i].norm() * images[j].norm();
      } else {
        x = commute ? full_->commutator(basis_[i], basis_[j]) : full_->product(basis_[i], basis_[j]);
        scale = basis_[i].norm() * basis_[j].norm();
      }
      const Expansion e = expand_with_residual(x, basis_);
      if (e.residual > options_.tol_closure * amplification * std::max(scale, 1e-300)) {
        std::ostringstream msg;
        msg << (commute ? "deformed commutator [" : "deformed product (") << basis_.labels()[i] << ", "
            << basis_.labels()[j] << (commute ? "]" : ")") << " leaves the basis span at t = " << time_
            << " (residual " << e.residual << ")";
        throw ClosureError(msg.str(), e.residual);
      }
      const ComplexVector c = image_ ? ComplexVector(*inverse_image_ * e.coefficients) : e.coefficients;
      for (int k = 0; k < n; ++k) {
        table.at(k, i, j) = c(k);
        if (commute) table.at(k, j, i) = -c(k);
      }
    }
  }
  return table;
}

Operator deformed_product(const DeformedAlgebraContext& ctx, const Operator& a, const Operator& b) {
  return ctx.full().product(a, b);
}

Operator deformed_commutator(const DeformedAlgebraContext& ctx, const Operator& a, const Operator& b) {
  return ctx.full().commutator(a, b);
}

StructureTensor structure_constants(const DeformedAlgebraContext& ctx) { return ctx.basis_table(true); }

StructureTensor product_constants(const DeformedAlgebraContext& ctx) { return ctx.basis_table(false); }

SequenceLimit analyze_sequence(std::span<const double> times, std::span<const Complex> values, double tol) {
  if (times.size() != values.size()) throw Error("analyze_sequence: size mismatch");
  const std::size_t n = values.size();
  if (n < 3) throw Error("analyze_sequence: need at least three points");
  SequenceLimit out;

  std::vector<double> ts, logs;
  for (std::size_t i = 0; i < n; ++i) {
    const double m = std::abs(values[i]);
    if (m > 1e-300) {
      ts.push_back(times[i]);
      logs.push_back(std::log(m));
    }
  }
  out.growth_rate = slope(ts, logs);

  const double d_last = std::abs(values[n - 1] - values[n - 2]);
  const double d_prev = std::abs(values[n - 2] - values[n - 3]);
  out.delta = d_last;
  if (d_last < tol && d_prev < tol) {
    out.converged = true;
    out.value = values[n - 1];
    return out;
  }

  if (n >= 4 && uniform(times.subspan(n - 4)) && d_last < d_prev) {
    const auto a_prev = aitken(values[n - 4], values[n - 3], values[n - 2]);
    const auto a_last = aitken(values[n - 3], values[n - 2], values[n - 1]);
    if (a_prev && a_last && std::abs(*a_last - *a_prev) < tol) {
      out.converged = true;
      out.value = *a_last;
      out.delta = std::abs(*a_last - *a_prev);
      return out;
    }
  }

  const double m1 = std::abs(values[n - 3]), m2 = std::abs(values[n - 2]), m3 = std::abs(values[n - 1]);
  out.diverging = out.growth_rate > 0.0 && m1 < m2 && m2 < m3 && d_last > d_prev;
  return out;
}

void validate_schedule(std::span<const double> schedule, std::size_t min_size) {
  if (schedule.size() < min_size) {
    throw Error("schedule needs at least " + std::to_string(min_size) + " times");
  }
  for (std::size_t i = 0; i < schedule.size(); ++i) {
    if (!std::isfinite(schedule[i]) || schedule[i] < 0.0) throw Error("schedule times must be finite and >= 0");
    if (i > 0 && !(schedule[i] > schedule[i - 1])) throw Error("schedule must be strictly increasing");
  }
}

WeakLimit weak_limit_observable(const Superoperator& adjoint, const Operator& a, std::span<const double> schedule,
                                double tol) {
  validate_schedule(schedule);
  if (a.rows() != adjoint.dim() || a.cols() != adjoint.dim()) throw DimensionError("weak_limit_observable: dimension mismatch");

  // One exponential per distinct step length; uniform schedules need two.
  std::map<double, Superoperator> steps;
  auto step = [&](double h) -> const Superoperator& {
    auto it = steps.find(h);
    if (it == steps.end()) it = steps.emplace(h, propagator(adjoint, h)).first;
    return it->second;
  };
  std::vector<Operator> orbit;
  orbit.push_back(qcontract::apply(propagator(adjoint, schedule[0]), a));
  for (std::size_t i = 1; i < schedule.size(); ++i) {
    double h = schedule[i] - schedule[i - 1];
    for (const auto& [known, _] : steps) {
      if (std::abs(known - h) <= 1e-12 * std::max(1.0, h)) h = known;
    }
    orbit.push_back(qcontract::apply(step(h), orbit.back()));
  }

  return limit_of_orbit(schedule, orbit, tol);
}

WeakLimit limit_of_orbit(std::span<const double> times, const std::vector<Operator>& orbit, double tol) {
  if (orbit.size() != times.size() || orbit.empty()) throw Error("limit_of_orbit: size mismatch");
  const auto d = orbit.front().rows();
  const auto dc = orbit.front().cols();
  WeakLimit out;
  Operator limit(d, dc);
  bool converged = true;
  std::vector<Complex> entry(times.size());
  for (Eigen::Index r = 0; r < d; ++r) {
    for (Eigen::Index c = 0; c < dc; ++c) {
      for (std::size_t s = 0; s < orbit.size(); ++s) entry[s] = orbit[s](r, c);
      const SequenceLimit sl = analyze_sequence(times, entry, tol);
      converged = converged && sl.converged;
      limit(r, c) = sl.value;
      out.final_delta = std::max(out.final_delta, sl.delta);
      if (sl.diverging) out.growth_rate = std::max(out.growth_rate, sl.growth_rate);
    }
  }
  if (converged) out.limit = std::move(limit);
  return out;
}

TableLimit extrapolate_tables(const std::vector<StructureTensor>& series, double tol) {
  if (series.size() < 3) throw Error("extrapolate_tables: need at least three tensors");
  const int n = series.front().n;
  std::vector<double> times;
  for (const auto& s : series) {
    if (s.n != n) throw DimensionError("extrapolate_tables: tensor sizes differ");
    times.push_back(s.time);
  }
  TableLimit out;
  StructureTensor limit(n, kInf);
  bool converged = true;
  std::vector<Complex> entry(series.size());
  for (int k = 0; k < n; ++k) {
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        for (std::size_t s = 0; s < series.size(); ++s) entry[s] = series[s].at(k, i, j);
        const SequenceLimit sl = analyze_sequence(times, entry, tol);
        out.final_delta = std::max(out.final_delta, sl.delta);
        if (sl.converged) {
          limit.at(k, i, j) = sl.value;
        } else {
          converged = false;
          if (sl.diverging) out.divergent_entries.push_back({k, i, j, sl.growth_rate});
        }
      }
    }
  }
  out.converged = converged;
  if (converged) out.limit = std::move(limit);
  return out;
}

LimitReport asymptotic_structure_constants(const Superoperator& adjoint, const OperatorBasis& basis,
                                           std::span<const double> schedule, double tol,
                                           const DeformedOptions& options) {
  validate_schedule(schedule);
  DeformedOptions opts = options;
  opts.full_space = false;
  std::shared_ptr<const PropagatorFamily> family;
  if (!restrict_to_span(adjoint, basis, opts.tol_invariance)) {
    family = std::make_shared<const PropagatorFamily>(adjoint);
  }

  LimitReport report;
  report.times_used.assign(schedule.begin(), schedule.end());
  std::vector<StructureTensor> products;
  bool products_closed = true;
  for (double t : schedule) {
    const DeformedAlgebraContext ctx(adjoint, basis, t, opts, family);
    report.series.push_back(structure_constants(ctx));
    if (products_closed) {
      try {
        products.push_back(product_constants(ctx));
      } catch (const ClosureError&) {
        products_closed = false;
        products.clear();
      }
    }
  }

  TableLimit bracket = extrapolate_tables(report.series, tol);
  report.converged = bracket.converged;
  report.limit = std::move(bracket.limit);
  report.divergent_entries = std::move(bracket.divergent_entries);
  report.final_delta = bracket.final_delta;
  if (products_closed) report.product = extrapolate_tables(products, tol);
  return report;
}

std::vector<double> default_schedule(const Superoperator& adjoint, const OperatorBasis& basis, double gamma_ref,
                                     const DeformedOptions& options, int max_points) {
  if (!(gamma_ref > 0.0) || !std::isfinite(gamma_ref)) throw Error("default_schedule: reference rate must be positive");
  DeformedOptions opts = options;
  opts.full_space = false;
  std::shared_ptr<const PropagatorFamily> family;
  if (!restrict_to_span(adjoint, basis, opts.tol_invariance)) {
    family = std::make_shared<const PropagatorFamily>(adjoint);
  }
  std::vector<double> times;
  for (int k = 1; k <= max_points; ++k) {
    const double t = 2.0 * k / gamma_ref;
    try {
      const DeformedAlgebraContext ctx(adjoint, basis, t, opts, family);
    } catch (const IllConditionedError&) {
      break;
    }
    times.push_back(t);
  }
  return times;
}

}  // namespace qcontract
