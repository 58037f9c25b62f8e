#pragma once

#include <span>
#include <vector>

#include "bridgelab/core.hpp"

namespace bridgelab::kernel {

// Unrolled dot product with two split accumulators. Fixed accumulation
// order; every dot in the project goes through here so equal inputs give
// bitwise equal outputs.
double dot(std::span<const double> a, std::span<const double> b);

// sq_norms[i] = dot(row i, row i).
std::vector<double> row_sq_norms(const Matrix& pts);

// Squared distance via the Gram expansion |a|^2 + |b|^2 - 2<a,b>, given the
// precomputed squared norms. The expansion cancels catastrophically when the
// points nearly coincide, so results below a small fraction of the norm mass
// are recomputed by direct differencing; negative round-off is clamped to 0.
double sq_dist(std::span<const double> a, std::span<const double> b,
               double sq_norm_a, double sq_norm_b);

// Full p x q matrix of squared distances between rows of a and rows of b.
// Register-blocked: 2 x 2 row tiles, inner dimension unrolled by 8 with two
// accumulators per dot (the shape of kernel::dot).
Matrix cross_sq_dists(const Matrix& a, const Matrix& b);

}  // namespace bridgelab::kernel
