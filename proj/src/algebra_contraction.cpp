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

#include "qcontract/algebra_contraction.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include "qcontract/errors.hpp"

namespace qcontract {

namespace {

template <typename Scalar>
using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

// Dense (k, i, j) tensor over Scalar.
template <typename Scalar>
struct Table {
  int n = 0;
  std::vector<Scalar> v;
  explicit Table(int size) : n(size), v(static_cast<std::size_t>(size) * size * size, Scalar(0)) {}
  Scalar& at(int k, int i, int j) { return v[(static_cast<std::size_t>(k) * n + i) * n + j]; }
  Scalar at(int k, int i, int j) const { return v[(static_cast<std::size_t>(k) * n + i) * n + j]; }
  double max_abs() const {
    double m = 0.0;
    for (const auto& x : v) m = std::max(m, static_cast<double>(std::abs(x)));
    return m;
  }

  Vec<Scalar> bracket(const Vec<Scalar>& x, const Vec<Scalar>& y) const {
    Vec<Scalar> out = Vec<Scalar>::Zero(n);
    for (int k = 0; k < n; ++k) {
      Scalar s(0);
      for (int i = 0; i < n; ++i) {
        if (x(i) == Scalar(0)) continue;
        for (int j = 0; j < n; ++j) s += x(i) * y(j) * at(k, i, j);
      }
      out(k) = s;
    }
    return out;
  }

  // ad(e_i) as a matrix: (ad_i)_{k j} = C^k_ij.
  Mat<Scalar> ad(int i) const {
    Mat<Scalar> m(n, n);
    for (int k = 0; k < n; ++k)
      for (int j = 0; j < n; ++j) m(k, j) = at(k, i, j);
    return m;
  }
};

// Orthonormal basis (columns) of the column span, rank decided relative to
// the largest singular value and to an absolute floor.
template <typename Scalar>
Mat<Scalar> column_span(const Mat<Scalar>& m, double rel_tol, double abs_floor) {
  if (m.cols() == 0 || m.rows() == 0) return Mat<Scalar>(m.rows(), 0);
  Eigen::BDCSVD<Mat<Scalar>> svd(m, Eigen::ComputeThinU);
  const auto& s = svd.singularValues();
  const double thr = std::max(rel_tol * (s.size() ? s(0) : 0.0), abs_floor);
  int rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) rank += s(i) > thr ? 1 : 0;
  return svd.matrixU().leftCols(rank);
}

template <typename Scalar>
Mat<Scalar> null_space(const Mat<Scalar>& m, double rel_tol, double abs_floor) {
  const Eigen::Index n = m.cols();
  Eigen::BDCSVD<Mat<Scalar>> svd(m, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  const double thr = std::max(rel_tol * (s.size() ? s(0) : 0.0), abs_floor);
  int rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) rank += s(i) > thr ? 1 : 0;
  return svd.matrixV().rightCols(n - rank);
}

template <typename Scalar>
Mat<Scalar> center_of(const Table<Scalar>& t, double rel_tol, double abs_floor) {
  const int n = t.n;
  Mat<Scalar> m(static_cast<Eigen::Index>(n) * n, n);
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) m(k * n + j, i) = t.at(k, i, j);
  return null_space<Scalar>(m, rel_tol, abs_floor);
}

// Orthonormal basis of span{[a, b] : a in A, b in B}.
template <typename Scalar>
Mat<Scalar> bracket_span(const Table<Scalar>& t, const Mat<Scalar>& a, const Mat<Scalar>& b, double rel_tol,
                         double abs_floor) {
  Mat<Scalar> stack(t.n, a.cols() * b.cols());
  Eigen::Index col = 0;
  for (Eigen::Index p = 0; p < a.cols(); ++p)
    for (Eigen::Index q = 0; q < b.cols(); ++q) stack.col(col++) = t.bracket(a.col(p), b.col(q));
  return column_span<Scalar>(stack, rel_tol, abs_floor);
}

template <typename Scalar>
Mat<Scalar> killing_of(const Table<Scalar>& t) {
  const int n = t.n;
  std::vector<Mat<Scalar>> ads;
  for (int i = 0; i < n; ++i) ads.push_back(t.ad(i));
  Mat<Scalar> k(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) k(i, j) = (ads[i] * ads[j]).trace();
  return k;
}

template <typename Scalar>
Table<Scalar> quotient_of(const Table<Scalar>& t, const Mat<Scalar>& ideal) {
  const int n = t.n;
  const int c = static_cast<int>(ideal.cols());
  Eigen::HouseholderQR<Mat<Scalar>> qr(ideal);
  const Mat<Scalar> q = qr.householderQ() * Mat<Scalar>::Identity(n, n);
  const Mat<Scalar> w = q.rightCols(n - c);
  Table<Scalar> out(n - c);
  for (int a = 0; a < n - c; ++a) {
    for (int b = 0; b < n - c; ++b) {
      const Vec<Scalar> coords = w.adjoint() * t.bracket(w.col(a), w.col(b));
      for (int k = 0; k < n - c; ++k) out.at(k, a, b) = coords(k);
    }
  }
  return out;
}

struct RealForm {
  bool ok = false;
  Table<double> table{0};
};

// Rotates C by the phase of its largest entry and keeps it if the result is
// real to working accuracy.
RealForm real_form(const StructureTensor& c, double rel_tol) {
  RealForm out;
  out.table = Table<double>(c.n);
  Complex dominant{0.0, 0.0};
  for (const auto& v : c.values) {
    if (std::abs(v) > std::abs(dominant)) dominant = v;
  }
  if (std::abs(dominant) == 0.0) {
    out.ok = true;
    return out;
  }
  const Complex rotation = std::conj(dominant) / std::abs(dominant);
  const double scale = std::abs(dominant);
  for (std::size_t idx = 0; idx < c.values.size(); ++idx) {
    const Complex r = c.values[idx] * rotation;
    if (std::abs(r.imag()) > std::max(rel_tol, 1e-9) * scale) return out;
    out.table.v[idx] = r.real();
  }
  out.ok = true;
  return out;
}

Table<Complex> complex_table(const StructureTensor& c) {
  Table<Complex> t(c.n);
  t.v = c.values;
  return t;
}

StructureTensor to_tensor(const Table<Complex>& t, double time) {
  StructureTensor out(t.n, time);
  out.values = t.v;
  return out;
}

KillingSignature signature_of(const Eigen::MatrixXd& k, double scale, double rel_tol) {
  KillingSignature sig;
  const int n = static_cast<int>(k.rows());
  if (n == 0) return sig;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (k + k.transpose()), Eigen::EigenvaluesOnly);
  const auto& ev = es.eigenvalues();
  const double largest = ev.cwiseAbs().maxCoeff();
  const double thr = std::max(rel_tol * largest, 1e-9 * scale * scale * n);
  for (int i = 0; i < n; ++i) {
    if (ev(i) > thr) {
      ++sig.positive;
    } else if (ev(i) < -thr) {
      ++sig.negative;
    } else {
      ++sig.zero;
    }
  }
  return sig;
}

template <typename Scalar>
bool solvable(const Table<Scalar>& t, double rel_tol, double abs_floor) {
  Mat<Scalar> g = Mat<Scalar>::Identity(t.n, t.n);
  for (int step = 0; step <= t.n; ++step) {
    Mat<Scalar> next = bracket_span<Scalar>(t, g, g, rel_tol, abs_floor);
    if (next.cols() == 0) return true;
    if (next.cols() == g.cols()) return false;
    g = next;
  }
  return false;
}

// Decision rules on an algebra of dimension <= 3 (plus generic fallbacks).
template <typename Scalar>
LieLabel decide(const Table<Scalar>& t, const std::optional<KillingSignature>& sig, double rel_tol, double zero_tol,
                std::string& note) {
  const int n = t.n;
  const double scale = t.max_abs();
  if (scale <= zero_tol) return LieLabel::abelian;
  const double floor = zero_tol;
  const Mat<Scalar> all = Mat<Scalar>::Identity(n, n);
  const Mat<Scalar> derived = bracket_span<Scalar>(t, all, all, rel_tol, floor);
  const Mat<Scalar> z = center_of<Scalar>(t, rel_tol, floor);
  const int dd = static_cast<int>(derived.cols());
  const int cd = static_cast<int>(z.cols());

  if (n == 3) {
    if (sig && sig->zero == 0) return sig->negative == 3 ? LieLabel::su2_so3 : LieLabel::sl2r_so21;
    const bool derived_abelian = bracket_span<Scalar>(t, derived, derived, rel_tol, floor).cols() == 0;
    if (dd == 2 && derived_abelian && sig && sig->zero == 2) {
      return sig->negative == 1 ? LieLabel::e2 : LieLabel::iso11;
    }
    if (dd == 1 && cd == 1) {
      // derived algebra inside the center: nilpotent
      Mat<Scalar> joined(n, 2);
      joined << derived, z;
      if (column_span<Scalar>(joined, rel_tol, floor).cols() == 1) return LieLabel::heisenberg;
    }
    if (!sig && dd == 2) note = "no real form: E(2) and ISO(1,1) cannot be told apart";
  }
  if (n > 3) note = "dimension above the low-dimensional table";
  if (solvable<Scalar>(t, rel_tol, floor)) return LieLabel::solvable_other;
  return LieLabel::unclassified;
}

template <typename Scalar>
Mat<Scalar> to_matrix(const std::vector<ComplexVector>& vectors, int n) {
  Mat<Scalar> m(n, static_cast<Eigen::Index>(vectors.size()));
  for (std::size_t c = 0; c < vectors.size(); ++c) {
    if (vectors[c].size() != n) throw DimensionError("quotient: vector length differs from algebra dimension");
    for (int i = 0; i < n; ++i) {
      if constexpr (std::is_same_v<Scalar, double>) {
        m(i, static_cast<Eigen::Index>(c)) = vectors[c](i).real();
      } else {
        m(i, static_cast<Eigen::Index>(c)) = vectors[c](i);
      }
    }
  }
  return m;
}

template <typename Scalar>
std::vector<ComplexVector> to_vectors(const Mat<Scalar>& m) {
  std::vector<ComplexVector> out;
  for (Eigen::Index c = 0; c < m.cols(); ++c) out.push_back(m.col(c).template cast<Complex>());
  return out;
}

template <typename Scalar>
LieClassification classify_table(const Table<Scalar>& t, bool real, const ClassifyOptions& options) {
  LieClassification out;
  out.real_form = real;
  const double scale = t.max_abs();
  const double floor = options.zero_tol;
  const Mat<Scalar> all = Mat<Scalar>::Identity(t.n, t.n);
  out.derived_dim = scale <= floor ? 0 : static_cast<int>(bracket_span<Scalar>(t, all, all, options.rel_tol, floor).cols());
  const Mat<Scalar> z = scale <= floor ? all : center_of<Scalar>(t, options.rel_tol, floor);
  out.center_dim = static_cast<int>(z.cols());

  const Mat<Scalar> k = killing_of<Scalar>(t);
  std::optional<KillingSignature> sig;
  if constexpr (std::is_same_v<Scalar, double>) {
    sig = signature_of(k, scale, options.rel_tol);
  }
  if (sig) {
    out.killing_signature = *sig;
  } else {
    out.killing_signature.zero = t.n;
  }

  if (scale <= floor) {
    out.killing_signature = {0, 0, t.n};
    out.label = LieLabel::abelian;
    return out;
  }

  Mat<Scalar> ideal;
  if (options.quotient) {
    ideal = to_matrix<Scalar>(*options.quotient, t.n);
    if (ideal.cols() > 0) ideal = column_span<Scalar>(ideal, options.rel_tol, 0.0);
  } else if (t.n > 3 && z.cols() > 0 && z.cols() < t.n) {
    ideal = z;
  }
  if (ideal.cols() > 0) {
    for (Eigen::Index c = 0; c < ideal.cols(); ++c) {
      for (int j = 0; j < t.n; ++j) {
        if (t.bracket(ideal.col(c), all.col(j)).norm() > std::max(floor, options.rel_tol * scale)) {
          throw Error("classify: quotient directions are not central");
        }
      }
    }
    const Table<Scalar> q = quotient_of<Scalar>(t, ideal);
    out.quotient_dim = static_cast<int>(ideal.cols());
    std::optional<KillingSignature> qsig;
    if constexpr (std::is_same_v<Scalar, double>) qsig = signature_of(killing_of<double>(q), scale, options.rel_tol);
    out.label = decide<Scalar>(q, qsig, options.rel_tol, options.zero_tol, out.note);
  } else {
    out.label = decide<Scalar>(t, sig, options.rel_tol, options.zero_tol, out.note);
  }
  return out;
}

}  // namespace

std::string to_string(LieLabel label) {
  switch (label) {
    case LieLabel::abelian: return "abelian";
    case LieLabel::heisenberg: return "heisenberg";
    case LieLabel::e2: return "e2";
    case LieLabel::iso11: return "iso11";
    case LieLabel::su2_so3: return "su2_so3";
    case LieLabel::sl2r_so21: return "sl2r_so21";
    case LieLabel::solvable_other: return "solvable_other";
    case LieLabel::unclassified: return "unclassified";
  }
  return "unclassified";
}

std::optional<LieLabel> parse_lie_label(const std::string& text) {
  for (LieLabel l : {LieLabel::abelian, LieLabel::heisenberg, LieLabel::e2, LieLabel::iso11, LieLabel::su2_so3,
                     LieLabel::sl2r_so21, LieLabel::solvable_other, LieLabel::unclassified}) {
    if (to_string(l) == text) return l;
  }
  return std::nullopt;
}

double jacobi_residual(const StructureTensor& c) {
  const int n = c.n;
  double worst = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (int l = 0; l < n; ++l) {
        double norm2 = 0.0;
        for (int k = 0; k < n; ++k) {
          Complex s{0.0, 0.0};
          for (int m = 0; m < n; ++m) {
            s += c.at(m, i, j) * c.at(k, m, l) + c.at(m, j, l) * c.at(k, m, i) + c.at(m, l, i) * c.at(k, m, j);
          }
          norm2 += std::norm(s);
        }
        worst = std::max(worst, std::sqrt(norm2));
      }
    }
  }
  return worst;
}

Eigen::MatrixXd killing_form(const StructureTensor& c) {
  const RealForm rf = real_form(c, 1e-9);
  if (rf.ok) return killing_of<double>(rf.table);
  return killing_of<Complex>(complex_table(c)).real();
}

std::vector<ComplexVector> center(const StructureTensor& c, double rel_tol) {
  const RealForm rf = real_form(c, rel_tol);
  const double floor = 1e-12 * std::max(1.0, c.max_abs());
  if (rf.ok) return to_vectors<double>(center_of<double>(rf.table, rel_tol, floor));
  return to_vectors<Complex>(center_of<Complex>(complex_table(c), rel_tol, floor));
}

int derived_dimension(const StructureTensor& c, double rel_tol) {
  const Table<Complex> t = complex_table(c);
  const Mat<Complex> all = Mat<Complex>::Identity(c.n, c.n);
  return static_cast<int>(bracket_span<Complex>(t, all, all, rel_tol, 1e-12 * std::max(1.0, c.max_abs())).cols());
}

StructureTensor quotient(const StructureTensor& c, const std::vector<ComplexVector>& vectors) {
  const Table<Complex> t = complex_table(c);
  Mat<Complex> ideal = to_matrix<Complex>(vectors, c.n);
  ideal = column_span<Complex>(ideal, 1e-12, 0.0);
  return to_tensor(quotient_of<Complex>(t, ideal), c.time);
}

LieClassification classify(const StructureTensor& c, const ClassifyOptions& options) {
  LieClassification out;
  const RealForm rf = real_form(c, options.rel_tol);
  if (rf.ok) {
    out = classify_table<double>(rf.table, true, options);
  } else {
    out = classify_table<Complex>(complex_table(c), false, options);
  }
  out.jacobi_residual = jacobi_residual(c);
  return out;
}

KernelReport kernel_of_adjoint(const Superoperator& adjoint, double rel_tol) {
  const int d = adjoint.dim();
  KernelReport out;
  const Mat<Complex> null = null_space<Complex>(adjoint.matrix(), rel_tol, 0.0);
  out.kernel_dim = static_cast<int>(null.cols());
  for (Eigen::Index c = 0; c < null.cols(); ++c) out.kernel_basis.push_back(unvectorize(null.col(c), d));

  const double tol = 1e-9;
  out.closed_under_commutator = true;
  out.commutant_is_abelian = true;
  for (std::size_t i = 0; i < out.kernel_basis.size(); ++i) {
    for (std::size_t j = i + 1; j < out.kernel_basis.size(); ++j) {
      const Operator x = commutator(out.kernel_basis[i], out.kernel_basis[j]);
      if (x.norm() > tol) out.commutant_is_abelian = false;
      const ComplexVector v = vectorize(x);
      const ComplexVector outside = v - null * (null.adjoint() * v);
      if (outside.norm() > tol * std::max(1.0, v.norm())) out.closed_under_commutator = false;
    }
  }
  return out;
}

}  // namespace qcontract
