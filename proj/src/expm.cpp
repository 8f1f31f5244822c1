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

#include "qcontract/expm.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numeric>

#include "qcontract/errors.hpp"

namespace qcontract {

namespace {

using Mat = Eigen::MatrixXcd;

constexpr std::array<double, 4> kThetaLow = {1.495585217958292e-2, 2.539398330063230e-1,
                                             9.504178996162932e-1, 2.097847961257068e0};
constexpr double kTheta13 = 5.371920351148152;

double one_norm(const Mat& a) { return a.cwiseAbs().colwise().sum().maxCoeff(); }

// Pade coefficients b_0..b_m for m = 3, 5, 7, 9.
const std::vector<double>& low_order_coefficients(int m) {
  static const std::vector<double> b3 = {120., 60., 12., 1.};
  static const std::vector<double> b5 = {30240., 15120., 3360., 420., 30., 1.};
  static const std::vector<double> b7 = {17297280., 8648640., 1995840., 277200., 25200., 1512., 56., 1.};
  static const std::vector<double> b9 = {17643225600., 8821612800., 2075673600., 302702400., 30270240.,
                                         2162160., 110880., 3960., 90., 1.};
  switch (m) {
    case 3: return b3;
    case 5: return b5;
    case 7: return b7;
    default: return b9;
  }
}

Mat solve_pade(const Mat& u, const Mat& v) {
  // r = (V - U)^-1 (V + U)
  return (v - u).partialPivLu().solve(v + u);
}

Mat pade_low(const Mat& a, int m) {
  const auto& b = low_order_coefficients(m);
  const Mat id = Mat::Identity(a.rows(), a.cols());
  const Mat a2 = a * a;
  Mat power = id;
  Mat u_inner = b[1] * id;
  Mat v = b[0] * id;
  for (int k = 2; k <= m; k += 2) {
    power = power * a2;
    u_inner += b[static_cast<std::size_t>(k + 1)] * power;
    v += b[static_cast<std::size_t>(k)] * power;
  }
  return solve_pade(a * u_inner, v);
}

Mat pade13(const Mat& a) {
  static constexpr std::array<double, 14> b = {
      64764752532480000., 32382376266240000., 7771770303897600., 1187353796428800.,
      129060195264000.,   10559470521600.,    670442572800.,     33522128640.,
      1323241920.,        40840800.,          960960.,           16380.,
      182.,               1.};
  const Mat id = Mat::Identity(a.rows(), a.cols());
  const Mat a2 = a * a;
  const Mat a4 = a2 * a2;
  const Mat a6 = a4 * a2;
  Mat u = a * (a6 * (b[13] * a6 + b[11] * a4 + b[9] * a2) + b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * id);
  Mat v = a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2) + b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * id;
  return solve_pade(u, v);
}

}  // namespace

Eigen::MatrixXcd expm_pade(const Eigen::MatrixXcd& a) {
  if (a.rows() != a.cols()) throw Error("expm_pade: matrix must be square");
  if (a.size() == 0) return a;
  const double norm = one_norm(a);
  if (!a.allFinite() || !std::isfinite(norm)) throw Error("expm_pade: non-finite input");

  constexpr std::array<int, 4> orders = {3, 5, 7, 9};
  for (std::size_t i = 0; i < orders.size(); ++i) {
    if (norm <= kThetaLow[i]) return pade_low(a, orders[i]);
  }

  int squarings = 0;
  if (norm > kTheta13) squarings = static_cast<int>(std::ceil(std::log2(norm / kTheta13)));
  Mat r = pade13(a / std::ldexp(1.0, squarings));
  for (int s = 0; s < squarings; ++s) r = r * r;
  if (!r.allFinite()) throw Error("expm_pade: result overflowed");
  return r;
}

SpectralExponential::SpectralExponential(const Eigen::MatrixXcd& a, double max_vector_condition) {
  Eigen::ComplexEigenSolver<Mat> es(a, true);
  if (es.info() != Eigen::Success) return;
  values_ = es.eigenvalues();
  vectors_ = es.eigenvectors();
  Eigen::BDCSVD<Mat> svd(vectors_);
  const auto& sv = svd.singularValues();
  const double smallest = sv(sv.size() - 1);
  vector_condition_ = smallest > 0.0 ? sv(0) / smallest : std::numeric_limits<double>::infinity();
  if (!(vector_condition_ < max_vector_condition)) return;
  inverse_vectors_ = vectors_.partialPivLu().inverse();
  usable_ = true;
}

Eigen::MatrixXcd SpectralExponential::at(double t) const {
  if (!usable_) throw Error("SpectralExponential: decomposition is not usable");
  const Eigen::VectorXcd w = (t * values_).array().exp();
  return vectors_ * w.asDiagonal() * inverse_vectors_;
}

std::vector<std::vector<int>> decoupled_blocks(const Eigen::MatrixXcd& a) {
  const int n = static_cast<int>(a.rows());
  std::vector<int> parent(static_cast<std::size_t>(n));
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[static_cast<std::size_t>(x)] != x) {
      parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
      x = parent[static_cast<std::size_t>(x)];
    }
    return x;
  };
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      if (i != j && a(i, j) != std::complex<double>(0.0, 0.0)) {
        const int ri = find(i), rj = find(j);
        if (ri != rj) parent[static_cast<std::size_t>(std::max(ri, rj))] = std::min(ri, rj);
      }
    }
  }
  std::vector<std::vector<int>> blocks;
  std::vector<int> slot(static_cast<std::size_t>(n), -1);
  for (int i = 0; i < n; ++i) {
    const int r = find(i);
    if (slot[static_cast<std::size_t>(r)] < 0) {
      slot[static_cast<std::size_t>(r)] = static_cast<int>(blocks.size());
      blocks.emplace_back();
    }
    blocks[static_cast<std::size_t>(slot[static_cast<std::size_t>(r)])].push_back(i);
  }
  return blocks;
}

namespace {

Mat gather(const Mat& a, const std::vector<int>& idx) {
  const auto m = static_cast<Eigen::Index>(idx.size());
  Mat b(m, m);
  for (Eigen::Index c = 0; c < m; ++c)
    for (Eigen::Index r = 0; r < m; ++r) b(r, c) = a(idx[static_cast<std::size_t>(r)], idx[static_cast<std::size_t>(c)]);
  return b;
}

void scatter(Mat& out, const Mat& b, const std::vector<int>& idx) {
  const auto m = static_cast<Eigen::Index>(idx.size());
  for (Eigen::Index c = 0; c < m; ++c)
    for (Eigen::Index r = 0; r < m; ++r) out(idx[static_cast<std::size_t>(r)], idx[static_cast<std::size_t>(c)]) = b(r, c);
}

}  // namespace

Eigen::MatrixXcd expm_blockwise(const Eigen::MatrixXcd& a) {
  const auto blocks = decoupled_blocks(a);
  if (blocks.size() <= 1) return expm_pade(a);
  Mat out = Mat::Zero(a.rows(), a.cols());
  for (const auto& idx : blocks) scatter(out, expm_pade(gather(a, idx)), idx);
  return out;
}

BlockExponential::BlockExponential(const Eigen::MatrixXcd& a, double max_vector_condition) : n_(a.rows()) {
  values_.resize(n_);
  Eigen::Index filled = 0;
  for (auto& idx : decoupled_blocks(a)) {
    Mat sub = gather(a, idx);
    SpectralExponential sp(sub, max_vector_condition);
    if (sp.eigenvalues().size() == static_cast<Eigen::Index>(idx.size())) {
      values_.segment(filled, sp.eigenvalues().size()) = sp.eigenvalues();
    } else {
      values_.segment(filled, static_cast<Eigen::Index>(idx.size())) = sub.eigenvalues();
    }
    filled += static_cast<Eigen::Index>(idx.size());
    blocks_.push_back({std::move(idx), std::move(sub), std::move(sp)});
  }
}

bool BlockExponential::fully_spectral() const noexcept {
  for (const auto& b : blocks_) {
    if (!b.spectral.usable()) return false;
  }
  return true;
}

Eigen::MatrixXcd BlockExponential::at(double t) const {
  Mat out = Mat::Zero(n_, n_);
  for (const auto& b : blocks_) {
    if (b.spectral.usable()) {
      scatter(out, b.spectral.at(t), b.index);
    } else {
      scatter(out, expm_pade(t * b.matrix), b.index);
    }
  }
  return out;
}

}  // namespace qcontract
