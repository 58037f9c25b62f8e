#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "bridgelab/core.hpp"
#include "bridgelab/increments.hpp"

namespace bridgelab::walks {

// Partial-sum path: row k = S_k = X_1 + ... + X_k, row 0 = 0.
struct PathMatrix {
  Matrix points;  // (n+1) x d

  std::size_t n() const { return points.rows() - 1; }
  std::size_t d() const { return points.cols(); }
};

// Pinned path: row k = B_k = S_k - (k/n) S_n. Rows 0 and n are exactly zero.
struct BridgeCloud {
  Matrix points;  // (n+1) x d

  std::size_t n() const { return points.rows() - 1; }
  std::size_t d() const { return points.cols(); }
};

// Pairwise Euclidean distances of a point cloud, entries multiplied by
// scale_applied. Symmetric with zero diagonal; off-diagonal zeros are
// permitted (pseudo-metric).
struct DistanceMatrix {
  Matrix entries;  // m x m
  double scale_applied = 1.0;

  std::size_t size() const { return entries.rows(); }
  double diameter() const;
};

// Ingredients of the pinned-norm decomposition
//   |S_i - (i/n) S_n|^2
//     = (1 - i/n) |S_i|^2 + (i/n) |S_n - S_i|^2 - (i/n)(1 - i/n) |S_n|^2
// together with the split |S_i|^2 = T_i + Q_i, where T accumulates squared
// increment norms and Q the cross terms.
struct DecompositionDiagnostics {
  std::vector<double> T;  // T[i-1] = sum_{l <= i} |X_l|^2
  std::vector<double> Q;  // Q[i-1] = sum over ordered pairs l != k <= i of <X_l, X_k>
  double identity_residual = 0.0;  // max_i |LHS_i - RHS_i| / (1 + |LHS_i|)
};

// Prefix sums with a zero row prepended. Summation is index-ascending per
// coordinate; the order is part of the reproducibility contract.
PathMatrix cumulate(const increments::IncrementBatch& batch);

// Writes S_k - coef * S_n into out. Shared by every code path that forms
// pinned rows, so batch and streaming evaluation agree bitwise.
void pin_row(std::span<double> out, std::span<const double> s_k,
             std::span<const double> s_n, double coef);

BridgeCloud bridge_of(const PathMatrix& path);

// Zeroes every row with |X_k|^2 < threshold, keeping the big increments.
// The caller passes the threshold pre-multiplied (level times growth scale).
increments::IncrementBatch truncated_batch(const increments::IncrementBatch& batch,
                                           double threshold);

// entries[i][j] = scale * |P_i - P_j|, via the blocked Gram kernel with
// negative round-off clamped to 0. Diagonal is set to exact zero and the
// strict lower triangle mirrors the upper one.
DistanceMatrix distance_matrix(const Matrix& points, double scale);

// Rows floor(n*i/m) of the cloud, i = 0..m. Requires 1 <= m <= n.
BridgeCloud subsample_grid(const BridgeCloud& cloud, std::size_t m);

DecompositionDiagnostics decomposition_check(const increments::IncrementBatch& batch);

}  // namespace bridgelab::walks
