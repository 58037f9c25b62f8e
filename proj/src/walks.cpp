#include "bridgelab/walks.hpp"

#include <cmath>
#include <stdexcept>

#include "bridgelab/gram.hpp"

namespace bridgelab::walks {

double DistanceMatrix::diameter() const {
  double best = 0.0;
  const std::size_t m = entries.rows();
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      best = std::max(best, entries(i, j));
    }
  }
  return best;
}

PathMatrix cumulate(const increments::IncrementBatch& batch) {
  if (batch.count() == 0) throw std::invalid_argument("cumulate: empty batch");
  const std::size_t n = batch.count(), d = batch.d();
  PathMatrix path{Matrix(n + 1, d)};
  for (std::size_t k = 1; k <= n; ++k) {
    const auto prev = path.points.row(k - 1);
    const auto inc = batch.data.row(k - 1);
    auto cur = path.points.row(k);
    for (std::size_t j = 0; j < d; ++j) cur[j] = prev[j] + inc[j];
  }
  return path;
}

void pin_row(std::span<double> out, std::span<const double> s_k,
             std::span<const double> s_n, double coef) {
  for (std::size_t j = 0; j < out.size(); ++j) {
    out[j] = s_k[j] - coef * s_n[j];
  }
}

BridgeCloud bridge_of(const PathMatrix& path) {
  if (path.points.rows() < 2) throw std::invalid_argument("bridge_of: need n >= 1");
  const std::size_t n = path.n(), d = path.d();
  BridgeCloud bridge{Matrix(n + 1, d)};
  const auto s_n = path.points.row(n);
  for (std::size_t k = 0; k <= n; ++k) {
    double coef = static_cast<double>(k) / static_cast<double>(n);
    pin_row(bridge.points.row(k), path.points.row(k), s_n, coef);
  }
  return bridge;
}

increments::IncrementBatch truncated_batch(const increments::IncrementBatch& batch,
                                           double threshold) {
  if (threshold < 0.0) throw std::invalid_argument("truncated_batch: threshold < 0");
  increments::IncrementBatch out{batch.data};
  for (std::size_t k = 0; k < out.count(); ++k) {
    auto row = out.data.row(k);
    if (kernel::dot(row, row) < threshold) {
      for (double& v : row) v = 0.0;
    }
  }
  return out;
}

DistanceMatrix distance_matrix(const Matrix& points, double scale) {
  if (!(scale > 0.0)) throw std::invalid_argument("distance_matrix: scale must be > 0");
  if (points.rows() == 0) throw std::invalid_argument("distance_matrix: empty cloud");
  const std::size_t m = points.rows();
  Matrix sq = kernel::cross_sq_dists(points, points);
  DistanceMatrix out{Matrix(m, m), scale};
  for (std::size_t i = 0; i < m; ++i) {
    out.entries(i, i) = 0.0;
    for (std::size_t j = i + 1; j < m; ++j) {
      double v = scale * std::sqrt(sq(i, j));
      out.entries(i, j) = v;
      out.entries(j, i) = v;
    }
  }
  return out;
}

BridgeCloud subsample_grid(const BridgeCloud& cloud, std::size_t m) {
  const std::size_t n = cloud.n(), d = cloud.d();
  if (m < 1) throw ConfigError("subsample_grid: m must be >= 1");
  if (m > n) throw ConfigError("subsample_grid: m exceeds walk length");
  BridgeCloud out{Matrix(m + 1, d)};
  for (std::size_t i = 0; i <= m; ++i) {
    const std::size_t idx = n * i / m;
    const auto src = cloud.points.row(idx);
    auto dst = out.points.row(i);
    for (std::size_t j = 0; j < d; ++j) dst[j] = src[j];
  }
  return out;
}

DecompositionDiagnostics decomposition_check(const increments::IncrementBatch& batch) {
  const std::size_t n = batch.count(), d = batch.d();
  if (n == 0) throw std::invalid_argument("decomposition_check: empty batch");
  PathMatrix path = cumulate(batch);
  const auto s_n = path.points.row(n);
  const double sq_n = kernel::dot(s_n, s_n);

  DecompositionDiagnostics diag;
  diag.T.resize(n);
  diag.Q.resize(n);
  double t_acc = 0.0, q_acc = 0.0;
  std::vector<double> scratch(d);
  double worst = 0.0;
  for (std::size_t i = 1; i <= n; ++i) {
    const auto x_i = batch.data.row(i - 1);
    const auto s_prev = path.points.row(i - 1);
    const auto s_i = path.points.row(i);
    t_acc += kernel::dot(x_i, x_i);
    // Sum over ordered pairs l != k: each new increment contributes twice
    // its inner product with the previous partial sum.
    q_acc += 2.0 * kernel::dot(x_i, s_prev);
    diag.T[i - 1] = t_acc;
    diag.Q[i - 1] = q_acc;

    const double c = static_cast<double>(i) / static_cast<double>(n);
    pin_row(scratch, s_i, s_n, c);
    const double lhs = kernel::dot(scratch, scratch);
    for (std::size_t j = 0; j < d; ++j) scratch[j] = s_n[j] - s_i[j];
    const double tail_sq = kernel::dot(scratch, scratch);
    const double rhs = (1.0 - c) * kernel::dot(s_i, s_i) + c * tail_sq -
                       c * (1.0 - c) * sq_n;
    worst = std::max(worst, std::abs(lhs - rhs) / (1.0 + std::abs(lhs)));
  }
  diag.identity_residual = worst;
  return diag;
}

}  // namespace bridgelab::walks
