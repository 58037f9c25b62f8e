#include "bridgelab/gh.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "bridgelab/gram.hpp"

namespace bridgelab::gh {

namespace {

constexpr std::size_t kExactCap = 5;

double max_abs_diff(const Matrix& a, const Matrix& b) {
  double best = 0.0;
  const std::size_t m = a.rows();
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      best = std::max(best, std::abs(a(i, j) - b(i, j)));
    }
  }
  return best;
}

// Directed part of the squared Hausdorff distance: max over rows of `a` of
// the squared distance to the nearest row of `b`. Exactness of the pruning:
//   - a row whose cheap upper bound (a concrete candidate pair) does not
//     exceed the running max cannot raise the max and is skipped;
//   - within a row, |  |a| - |b|  | <= |a - b| bounds candidates away; the
//     bound is deflated by a tiny slack before use so norm round-off can
//     never prune the true nearest neighbor.
double directed_sq(const Matrix& a, const Matrix& b,
                   const std::vector<double>& sq_na,
                   const std::vector<double>& sq_nb,
                   const std::vector<double>& norm_b,
                   const std::vector<std::size_t>& order_b) {
  const std::size_t p = a.rows(), q = b.rows();
  const bool paired = p == q;

  // norms of b in ascending order, for the window scan
  std::vector<double> sorted_nb(q);
  for (std::size_t j = 0; j < q; ++j) sorted_nb[j] = norm_b[order_b[j]];

  struct RowBound {
    double ub_sq;
    std::size_t row;
  };
  std::vector<RowBound> bounds(p);
  for (std::size_t i = 0; i < p; ++i) {
    const auto row = a.row(i);
    const double norm_a = std::sqrt(sq_na[i]);
    // candidate 1: nearest-norm row of b
    std::size_t pos = static_cast<std::size_t>(
        std::lower_bound(sorted_nb.begin(), sorted_nb.end(), norm_a) -
        sorted_nb.begin());
    std::size_t cand = order_b[pos < q ? pos : q - 1];
    double ub = kernel::sq_dist(row, b.row(cand), sq_na[i], sq_nb[cand]);
    if (pos > 0) {
      std::size_t c2 = order_b[pos - 1];
      ub = std::min(ub, kernel::sq_dist(row, b.row(c2), sq_na[i], sq_nb[c2]));
    }
    // candidate 2: same-index row when the clouds are aligned
    if (paired) {
      ub = std::min(ub, kernel::sq_dist(row, b.row(i), sq_na[i], sq_nb[i]));
    }
    bounds[i] = RowBound{ub, i};
  }
  std::sort(bounds.begin(), bounds.end(), [](const RowBound& x, const RowBound& y) {
    return x.ub_sq > y.ub_sq || (x.ub_sq == y.ub_sq && x.row < y.row);
  });

  double running_max = 0.0;
  for (const RowBound& rb : bounds) {
    if (rb.ub_sq <= running_max) break;  // no later row can raise the max
    const std::size_t i = rb.row;
    const auto row = a.row(i);
    const double norm_a = std::sqrt(sq_na[i]);
    double best = rb.ub_sq;
    std::size_t pos = static_cast<std::size_t>(
        std::lower_bound(sorted_nb.begin(), sorted_nb.end(), norm_a) -
        sorted_nb.begin());
    // two-pointer outward scan in norm order
    std::size_t lo = pos, hi = pos;
    bool lo_open = lo > 0, hi_open = hi < q;
    while (lo_open || hi_open) {
      bool take_hi;
      if (lo_open && hi_open) {
        take_hi = (sorted_nb[hi] - norm_a) <= (norm_a - sorted_nb[lo - 1]);
      } else {
        take_hi = hi_open;
      }
      std::size_t j;
      double dn;
      if (take_hi) {
        j = order_b[hi];
        dn = sorted_nb[hi] - norm_a;
        ++hi;
        hi_open = hi < q;
      } else {
        --lo;
        j = order_b[lo];
        dn = norm_a - sorted_nb[lo];
        lo_open = lo > 0;
      }
      if (dn > 0.0) {
        double bound = dn * dn * (1.0 - 1e-9);
        if (bound >= best) {
          if (take_hi) hi_open = false; else lo_open = false;
          continue;
        }
      }
      double sq = kernel::sq_dist(row, b.row(j), sq_na[i], sq_nb[j]);
      if (sq < best) best = sq;
    }
    running_max = std::max(running_max, best);
  }
  return running_max;
}

}  // namespace

double correspondence_upper(const walks::DistanceMatrix& d1,
                            const walks::DistanceMatrix& d2) {
  if (d1.size() != d2.size()) {
    throw std::runtime_error("correspondence_upper: size mismatch");
  }
  return 0.5 * max_abs_diff(d1.entries, d2.entries);
}

double diameter_lower(const walks::DistanceMatrix& d1,
                      const walks::DistanceMatrix& d2) {
  if (d1.size() == 0 || d2.size() == 0) {
    throw std::runtime_error("diameter_lower: empty space");
  }
  return 0.5 * std::abs(d1.diameter() - d2.diameter());
}

double exact_small(const walks::DistanceMatrix& d1,
                   const walks::DistanceMatrix& d2) {
  const std::size_t p = d1.size(), q = d2.size();
  if (p == 0 || q == 0) throw std::runtime_error("exact_small: empty space");
  if (p > kExactCap || q > kExactCap) {
    throw std::runtime_error("exact oracle capped at 5 points");
  }
  const Matrix& a = d1.entries;
  const Matrix& b = d2.entries;

  std::size_t total_f = 1, total_g = 1;
  for (std::size_t i = 0; i < p; ++i) total_f *= q;
  for (std::size_t j = 0; j < q; ++j) total_g *= p;

  double best = std::numeric_limits<double>::infinity();
  std::array<std::size_t, kExactCap> f{}, g{};
  for (std::size_t fi = 0; fi < total_f; ++fi) {
    std::size_t code = fi;
    for (std::size_t i = 0; i < p; ++i) {
      f[i] = code % q;
      code /= q;
    }
    // distortion contributed by graph(f) alone; prunes the whole g loop
    double df = 0.0;
    for (std::size_t i = 0; i < p && df < best; ++i) {
      for (std::size_t i2 = i + 1; i2 < p; ++i2) {
        df = std::max(df, std::abs(a(i, i2) - b(f[i], f[i2])));
      }
    }
    if (df >= best) continue;

    for (std::size_t gi = 0; gi < total_g; ++gi) {
      code = gi;
      for (std::size_t j = 0; j < q; ++j) {
        g[j] = code % p;
        code /= p;
      }
      double dist = df;
      for (std::size_t j = 0; j < q && dist < best; ++j) {
        for (std::size_t j2 = j + 1; j2 < q; ++j2) {
          dist = std::max(dist, std::abs(b(j, j2) - a(g[j], g[j2])));
        }
      }
      if (dist >= best) continue;
      // cross pairs between (i, f(i)) and (g(j), j)
      for (std::size_t i = 0; i < p && dist < best; ++i) {
        for (std::size_t j = 0; j < q; ++j) {
          dist = std::max(dist, std::abs(a(i, g[j]) - b(f[i], j)));
        }
      }
      if (dist < best) best = dist;
    }
  }
  return 0.5 * best;
}

double hausdorff_between_clouds(const Matrix& a, const Matrix& b) {
  if (a.rows() == 0 || b.rows() == 0) {
    throw std::runtime_error("hausdorff_between_clouds: empty cloud");
  }
  if (a.cols() != b.cols()) {
    throw std::runtime_error("hausdorff_between_clouds: dimension mismatch");
  }
  const std::vector<double> sq_na = kernel::row_sq_norms(a);
  const std::vector<double> sq_nb = kernel::row_sq_norms(b);
  std::vector<double> norm_a(a.rows()), norm_b(b.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) norm_a[i] = std::sqrt(sq_na[i]);
  for (std::size_t j = 0; j < b.rows(); ++j) norm_b[j] = std::sqrt(sq_nb[j]);

  auto order_by_norm = [](const std::vector<double>& norms) {
    std::vector<std::size_t> order(norms.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
      return norms[x] < norms[y] || (norms[x] == norms[y] && x < y);
    });
    return order;
  };
  const std::vector<std::size_t> order_a = order_by_norm(norm_a);
  const std::vector<std::size_t> order_b = order_by_norm(norm_b);

  double sq = std::max(directed_sq(a, b, sq_na, sq_nb, norm_b, order_b),
                       directed_sq(b, a, sq_nb, sq_na, norm_a, order_a));
  return std::sqrt(sq);
}

GhBoundReport bound_report(const walks::DistanceMatrix& d1,
                           const walks::DistanceMatrix& d2, bool want_exact) {
  GhBoundReport report;
  report.lower = diameter_lower(d1, d2);
  report.lower_method = "diameter-difference";
  if (d1.size() == d2.size()) {
    report.upper = correspondence_upper(d1, d2);
    report.upper_method = "identity-correspondence";
  } else {
    report.upper_method = "none (size mismatch)";
  }
  if (want_exact) {
    report.exact = exact_small(d1, d2);
    report.exact_method = "exhaustive-map-pairs";
  }
  return report;
}

}  // namespace bridgelab::gh
