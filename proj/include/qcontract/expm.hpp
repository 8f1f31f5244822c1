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

#include <vector>

#include <Eigen/Dense>

namespace qcontract {

/// exp(A) by scaling and squaring with diagonal Pade approximants of order
/// 3, 5, 7, 9 or 13 (Higham 2005). Throws qcontract::Error when the
/// result overflows.
Eigen::MatrixXcd expm_pade(const Eigen::MatrixXcd& a);

/// Cached eigendecomposition A = V diag(w) V^-1 for repeated exp(tA).
///
/// usable() is false when A is not diagonalizable to working accuracy, i.e.
/// cond(V) exceeds the threshold given at construction.
class SpectralExponential {
 public:
  explicit SpectralExponential(const Eigen::MatrixXcd& a, double max_vector_condition = 1e6);

  bool usable() const noexcept { return usable_; }
  double vector_condition() const noexcept { return vector_condition_; }
  const Eigen::VectorXcd& eigenvalues() const noexcept { return values_; }

  /// exp(t A). Requires usable().
  Eigen::MatrixXcd at(double t) const;

 private:
  Eigen::VectorXcd values_;
  Eigen::MatrixXcd vectors_;
  Eigen::MatrixXcd inverse_vectors_;
  double vector_condition_ = 0.0;
  bool usable_ = false;
};

/// Index sets of the decoupled diagonal blocks of A: connected components of
/// the graph with an edge i - j whenever A(i, j) or A(j, i) is nonzero.
std::vector<std::vector<int>> decoupled_blocks(const Eigen::MatrixXcd& a);

/// exp(A) evaluated separately on each decoupled block.
Eigen::MatrixXcd expm_blockwise(const Eigen::MatrixXcd& a);

/// exp(tA) for many t. Each decoupled block is exponentiated spectrally when
/// its eigenvectors are well conditioned and by Pade otherwise.
class BlockExponential {
 public:
  explicit BlockExponential(const Eigen::MatrixXcd& a, double max_vector_condition = 1e6);

  /// True when every block uses its eigendecomposition.
  bool fully_spectral() const noexcept;
  const Eigen::VectorXcd& eigenvalues() const noexcept { return values_; }
  std::size_t block_count() const noexcept { return blocks_.size(); }

  Eigen::MatrixXcd at(double t) const;

 private:
  struct Block {
    std::vector<int> index;
    Eigen::MatrixXcd matrix;
    SpectralExponential spectral;
  };
  Eigen::Index n_ = 0;
  std::vector<Block> blocks_;
  Eigen::VectorXcd values_;
};

}  // namespace qcontract
