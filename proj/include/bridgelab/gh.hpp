#pragma once

#include <optional>
#include <string>

#include "bridgelab/walks.hpp"

namespace bridgelab::gh {

// Bundle of bounds on the Gromov-Hausdorff distance of two finite
// (pseudo-)metric spaces. upper is absent when the spaces have different
// point counts (the index correspondence needs equal sizes); exact is
// present only when the caller requested the small-space oracle.
struct GhBoundReport {
  double lower = 0.0;
  std::string lower_method;
  std::optional<double> upper;
  std::string upper_method;
  std::optional<double> exact;
  std::string exact_method;
};

// Half the sup over the index correspondence {(i, i)} of |D1 - D2|; an upper
// bound because the identity relation on a shared grid is a correspondence.
// Requires equal sizes.
double correspondence_upper(const walks::DistanceMatrix& d1,
                            const walks::DistanceMatrix& d2);

// Half the diameter difference; the classical first lower bound. Sizes may
// differ.
double diameter_lower(const walks::DistanceMatrix& d1,
                      const walks::DistanceMatrix& d2);

// Exact Gromov-Hausdorff distance for spaces with at most 5 points each:
// half the minimum distortion over relations graph(f) union graph(g)^T with
// f: X -> Y, g: Y -> X. Every correspondence contains such a union and
// passing to a sub-relation never increases distortion, so this minimum
// ranges over enough relations to be exact. Enumeration prunes a candidate
// as soon as its running distortion reaches the incumbent.
double exact_small(const walks::DistanceMatrix& d1,
                   const walks::DistanceMatrix& d2);

// Hausdorff distance between two point clouds (rows) in a common R^d:
// max of the two directed farthest-nearest distances. Exact; internally
// prunes with norm windows and an early break over rows, which never changes
// the returned value.
double hausdorff_between_clouds(const Matrix& a, const Matrix& b);

// Assembles lower/upper/exact for the CLI. want_exact enforces the 5-point
// cap by throwing.
GhBoundReport bound_report(const walks::DistanceMatrix& d1,
                           const walks::DistanceMatrix& d2, bool want_exact);

}  // namespace bridgelab::gh
