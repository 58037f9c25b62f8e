#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bridgelab/walks.hpp"

namespace bridgelab::limits {

struct Atom {
  double x = 0.0;  // location in [0, 1]
  double y = 0.0;  // jump size, > eps
};

// Poisson atoms of intensity dx * nu(dy) on [0,1] x (0,inf), truncated to
// jump sizes above eps, plus the induced nondecreasing step function
// zeta_t = sum of y_k over x_k <= t.
struct SubordinatorSample {
  double alpha = 0.0;
  double eps = 0.0;
  std::vector<Atom> atoms;  // sorted by (x, y); all y > eps
  double zeta1 = 0.0;       // sum of all y, accumulated in atom order
};

// Series construction: arrival times Gamma_1 < Gamma_2 < ... of a unit-rate
// Poisson process (cumulative sums of Exp(1), fixed summation order), jump
// sizes y_k = Gamma_k^(-1/alpha) until y_k <= eps, then one uniform location
// per retained jump. The expected atom count is eps^(-alpha).
SubordinatorSample sample_subordinator(double alpha, double eps,
                                       std::uint64_t master_seed,
                                       std::uint64_t stream_key);

// Sum of y_k over x_k <= t (inclusive boundary). zeta_at(sample, 1) equals
// sample.zeta1 bitwise.
double zeta_at(const SubordinatorSample& sample, double t);

enum class MetricKind {
  WienerBridge,       // sqrt(u (1-u)), u = |t - s|
  SubordinatorPlain,  // sqrt|zeta_t - zeta_s|
  SubordinatorStmt,   // sqrt|zeta_t - zeta_s - (t-s) zeta_1|
  SubordinatorEmb,    // distance induced by the l2 atom embedding (below)
};

MetricKind metric_kind_from_string(const std::string& name);
std::string to_string(MetricKind kind);

// sqrt(u (1-u)) with u = |t - s|; both endpoints at distance 0 (the grid
// metric identifies 0 and 1).
double wiener_bridge_metric(double s, double t);

// Evaluates the kind's formula. sample may be null for WienerBridge and is
// required for the subordinator kinds. Symmetric in (s, t).
double limit_metric(MetricKind kind, const SubordinatorSample* sample, double s,
                    double t);

// (m+1) x (m+1) grid evaluation at i/m, scale_applied = 1.
walks::DistanceMatrix limit_distance_matrix(MetricKind kind,
                                            const SubordinatorSample* sample,
                                            std::size_t m);

// Both subordinator bridge formulas evaluated under the substitution
// zeta_t = t (every jump infinitesimal, the degenerate drift case):
// emb_value = sqrt((1-u)^2 u + u^2 (1-u)) = sqrt(u(1-u)), stmt_value =
// sqrt|u - u| = 0. The two formulas disagree except at u in {0, 1}; this
// probe documents the discrepancy deterministically.
struct ConsistencyProbe {
  double emb_value = 0.0;
  double stmt_value = 0.0;
};
ConsistencyProbe deterministic_consistency(double u);

// CDF of zeta_1 for alpha = 1/2: the one-sided stable law with Laplace
// transform exp(-Gamma(1/2) sqrt(lambda)), i.e. F(x) = erfc(sqrt(pi/(4x))).
double stable_half_cdf(double x);

// Mean zeta_1 mass removed by truncating jumps below eps:
// integral of y nu(dy) over (0, eps] = (alpha / (1 - alpha)) eps^(1-alpha).
double truncation_bias_mean(double alpha, double eps);

}  // namespace bridgelab::limits
