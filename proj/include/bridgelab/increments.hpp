#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>

#include "bridgelab/core.hpp"

namespace bridgelab::increments {

enum class Family { GaussianIsotropic, Rademacher, ParetoSphere };

Family family_from_string(const std::string& name);
std::string to_string(Family family);

// Pure-power jump intensity nu(dx) = alpha * x^(-alpha-1) dx on (0, inf),
// alpha in (0, 1), normalized so that nu((1, inf)) = 1. The matching growth
// sequence is a(n) = n^(1/alpha).
struct LevyMeasureSpec {
  double alpha = 0.0;

  double density(double x) const;
  // nu((s, inf)) = s^(-alpha).
  double tail(double s) const;
  // a(n) = n^(1/alpha).
  double scaling(double n) const;
  // integral of min(1, x) nu(dx) = alpha / (1 - alpha) + 1. Finite exactly
  // because alpha < 1.
  double min1_integral() const;
  // (n / a(n)) * E[R 1{R <= s a(n)}] for R with P(R > x) = x^(-alpha) on
  // [1, inf). Closed form:
  //   (alpha / (1 - alpha)) * s^(1-alpha) * (1 - (s a(n))^(alpha-1))   if s a(n) >= 1,
  //   0                                                                otherwise,
  // using n / a(n)^alpha = 1. Decays like s^(1-alpha) as s -> 0 with n
  // fixed large, which is the vanishing-truncated-mean property the heavy
  // tail case rests on.
  double truncated_mean_condition(double s, double n) const;
};

// A distribution over increment vectors in R^d, plus the deterministic
// normalization that makes bridge clouds comparable across (d, n).
struct IncrementModel {
  Family family = Family::GaussianIsotropic;
  std::size_t d = 0;
  std::optional<double> alpha;  // pareto-sphere only
  std::uint64_t master_seed = 0;

  bool is_l2() const { return family != Family::ParetoSphere; }
  LevyMeasureSpec levy() const;
};

// Validates and assembles a model. Throws ConfigError on d == 0, on alpha
// outside (0, 1), on alpha present for a square-integrable family or absent
// for pareto-sphere.
IncrementModel build_model(Family family, std::size_t d,
                           std::optional<double> alpha,
                           std::uint64_t master_seed);

// One i.i.d. block of increments, one row per step.
struct IncrementBatch {
  Matrix data;  // count x d

  std::size_t count() const { return data.rows(); }
  std::size_t d() const { return data.cols(); }
};

// Streaming sampler over one substream. The sequence of rows is a pure
// function of (model.master_seed, stream_key); row k of a stream never
// depends on how many rows the consumer materializes at a time, so a
// streaming consumer and sample_increments() see identical numbers.
//
// Draw order per row is fixed:
//   gaussian-isotropic: d normal variates, coordinates left to right;
//   rademacher:         d engine words, sign from the top bit;
//   pareto-sphere:      d normal variates (direction), then one uniform
//                       (radius), so the direction does not perturb the
//                       radius stream.
class IncrementSampler {
 public:
  IncrementSampler(const IncrementModel& model, std::uint64_t stream_key);

  // Writes the next row. out.size() must equal model().d.
  void next_row(std::span<double> out);

  const IncrementModel& model() const { return model_; }

 private:
  IncrementModel model_;
  std::mt19937_64 eng_;
  std::normal_distribution<double> normal_;
  std::uniform_real_distribution<double> unif_;
  double inv_sqrt_d_ = 0.0;
};

// Materializes `count` rows of the given substream.
IncrementBatch sample_increments(const IncrementModel& model, std::size_t count,
                                 std::uint64_t stream_key);

// Normalization multiplier for bridge point clouds before any metric
// comparison: n^(-1/2) for square-integrable families (variance scaling),
// a(n)^(-1/2) = n^(-1/(2 alpha)) for pareto-sphere (stable scaling).
double distance_scale(const IncrementModel& model, std::size_t n);

// Which moment regime the model sits in, with the quantity that certifies it.
struct ConditionDiagnostics {
  bool is_l2 = false;
  // For square-integrable families: max over coordinates of E[X(j)^2],
  // computed analytically (1/d for both). Empty for pareto-sphere.
  std::optional<double> max_component_second_moment;
  // For pareto-sphere: the tail index alpha. Empty otherwise.
  std::optional<double> tail_index;
};

ConditionDiagnostics condition_diagnostics(const IncrementModel& model);

}  // namespace bridgelab::increments
