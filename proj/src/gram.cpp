#include "bridgelab/gram.hpp"

#include <stdexcept>

namespace bridgelab::kernel {

namespace {

// Entries smaller than this fraction of the combined norm mass are assumed
// to have lost most of their significant bits to cancellation and are
// recomputed directly. Generous on purpose: a rescue costs one extra pass
// over d values and only fires for nearly coincident points.
constexpr double kRescueFraction = 1e-4;

double direct_sq_dist(const double* __restrict a, const double* __restrict b,
                      std::size_t d) {
  double s0 = 0.0, s1 = 0.0;
  std::size_t k = 0;
  for (; k + 8 <= d; k += 8) {
    double d0 = a[k] - b[k], d1 = a[k + 1] - b[k + 1];
    double d2 = a[k + 2] - b[k + 2], d3 = a[k + 3] - b[k + 3];
    double d4 = a[k + 4] - b[k + 4], d5 = a[k + 5] - b[k + 5];
    double d6 = a[k + 6] - b[k + 6], d7 = a[k + 7] - b[k + 7];
    s0 += d0 * d0 + d1 * d1 + d2 * d2 + d3 * d3;
    s1 += d4 * d4 + d5 * d5 + d6 * d6 + d7 * d7;
  }
  double t = 0.0;
  for (; k < d; ++k) {
    double dk = a[k] - b[k];
    t += dk * dk;
  }
  return s0 + s1 + t;
}

double finish_sq(double expanded, const double* a, const double* b,
                 std::size_t d, double sq_norm_a, double sq_norm_b) {
  if (expanded < kRescueFraction * (sq_norm_a + sq_norm_b)) {
    return direct_sq_dist(a, b, d);
  }
  return expanded;
}

}  // namespace

double dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw std::invalid_argument("dot: length mismatch");
  const double* __restrict x = a.data();
  const double* __restrict y = b.data();
  const std::size_t d = a.size();
  double s0 = 0.0, s1 = 0.0;
  std::size_t k = 0;
  for (; k + 8 <= d; k += 8) {
    s0 += x[k] * y[k] + x[k + 1] * y[k + 1] + x[k + 2] * y[k + 2] +
          x[k + 3] * y[k + 3];
    s1 += x[k + 4] * y[k + 4] + x[k + 5] * y[k + 5] + x[k + 6] * y[k + 6] +
          x[k + 7] * y[k + 7];
  }
  double t = 0.0;
  for (; k < d; ++k) t += x[k] * y[k];
  return s0 + s1 + t;
}

std::vector<double> row_sq_norms(const Matrix& pts) {
  std::vector<double> out(pts.rows());
  for (std::size_t i = 0; i < pts.rows(); ++i) {
    out[i] = dot(pts.row(i), pts.row(i));
  }
  return out;
}

double sq_dist(std::span<const double> a, std::span<const double> b,
               double sq_norm_a, double sq_norm_b) {
  double sq = sq_norm_a + sq_norm_b - 2.0 * dot(a, b);
  sq = finish_sq(sq, a.data(), b.data(), a.size(), sq_norm_a, sq_norm_b);
  return sq < 0.0 ? 0.0 : sq;
}

Matrix cross_sq_dists(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.cols()) {
    throw std::invalid_argument("cross_sq_dists: dimension mismatch");
  }
  const std::size_t p = a.rows(), q = b.rows(), d = a.cols();
  const std::vector<double> na = row_sq_norms(a);
  const std::vector<double> nb = row_sq_norms(b);
  Matrix out(p, q);

  std::size_t i = 0;
  for (; i + 2 <= p; i += 2) {
    const double* __restrict a0 = a.row(i).data();
    const double* __restrict a1 = a.row(i + 1).data();
    std::size_t j = 0;
    for (; j + 2 <= q; j += 2) {
      const double* __restrict b0 = b.row(j).data();
      const double* __restrict b1 = b.row(j + 1).data();
      // Four dots advance together; each keeps the two-accumulator split of
      // kernel::dot so the blocking never changes a dot's summation order.
      double s00a = 0.0, s00b = 0.0, s01a = 0.0, s01b = 0.0;
      double s10a = 0.0, s10b = 0.0, s11a = 0.0, s11b = 0.0;
      std::size_t k = 0;
      for (; k + 8 <= d; k += 8) {
        s00a += a0[k] * b0[k] + a0[k + 1] * b0[k + 1] + a0[k + 2] * b0[k + 2] +
                a0[k + 3] * b0[k + 3];
        s00b += a0[k + 4] * b0[k + 4] + a0[k + 5] * b0[k + 5] +
                a0[k + 6] * b0[k + 6] + a0[k + 7] * b0[k + 7];
        s01a += a0[k] * b1[k] + a0[k + 1] * b1[k + 1] + a0[k + 2] * b1[k + 2] +
                a0[k + 3] * b1[k + 3];
        s01b += a0[k + 4] * b1[k + 4] + a0[k + 5] * b1[k + 5] +
                a0[k + 6] * b1[k + 6] + a0[k + 7] * b1[k + 7];
        s10a += a1[k] * b0[k] + a1[k + 1] * b0[k + 1] + a1[k + 2] * b0[k + 2] +
                a1[k + 3] * b0[k + 3];
        s10b += a1[k + 4] * b0[k + 4] + a1[k + 5] * b0[k + 5] +
                a1[k + 6] * b0[k + 6] + a1[k + 7] * b0[k + 7];
        s11a += a1[k] * b1[k] + a1[k + 1] * b1[k + 1] + a1[k + 2] * b1[k + 2] +
                a1[k + 3] * b1[k + 3];
        s11b += a1[k + 4] * b1[k + 4] + a1[k + 5] * b1[k + 5] +
                a1[k + 6] * b1[k + 6] + a1[k + 7] * b1[k + 7];
      }
      double t00 = 0.0, t01 = 0.0, t10 = 0.0, t11 = 0.0;
      for (; k < d; ++k) {
        t00 += a0[k] * b0[k];
        t01 += a0[k] * b1[k];
        t10 += a1[k] * b0[k];
        t11 += a1[k] * b1[k];
      }
      double e00 = na[i] + nb[j] - 2.0 * (s00a + s00b + t00);
      double e01 = na[i] + nb[j + 1] - 2.0 * (s01a + s01b + t01);
      double e10 = na[i + 1] + nb[j] - 2.0 * (s10a + s10b + t10);
      double e11 = na[i + 1] + nb[j + 1] - 2.0 * (s11a + s11b + t11);
      e00 = finish_sq(e00, a0, b0, d, na[i], nb[j]);
      e01 = finish_sq(e01, a0, b1, d, na[i], nb[j + 1]);
      e10 = finish_sq(e10, a1, b0, d, na[i + 1], nb[j]);
      e11 = finish_sq(e11, a1, b1, d, na[i + 1], nb[j + 1]);
      out(i, j) = e00 < 0.0 ? 0.0 : e00;
      out(i, j + 1) = e01 < 0.0 ? 0.0 : e01;
      out(i + 1, j) = e10 < 0.0 ? 0.0 : e10;
      out(i + 1, j + 1) = e11 < 0.0 ? 0.0 : e11;
    }
    for (; j < q; ++j) {
      out(i, j) = sq_dist(a.row(i), b.row(j), na[i], nb[j]);
      out(i + 1, j) = sq_dist(a.row(i + 1), b.row(j), na[i + 1], nb[j]);
    }
  }
  for (; i < p; ++i) {
    for (std::size_t j = 0; j < q; ++j) {
      out(i, j) = sq_dist(a.row(i), b.row(j), na[i], nb[j]);
    }
  }
  return out;
}

}  // namespace bridgelab::kernel
