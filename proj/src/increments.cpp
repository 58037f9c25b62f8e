#include "bridgelab/increments.hpp"

#include <cmath>

#include "bridgelab/rng.hpp"

namespace bridgelab::increments {

Family family_from_string(const std::string& name) {
  if (name == "gaussian-isotropic") return Family::GaussianIsotropic;
  if (name == "rademacher") return Family::Rademacher;
  if (name == "pareto-sphere") return Family::ParetoSphere;
  throw ConfigError("unknown increment family: '" + name + "'");
}

std::string to_string(Family family) {
  switch (family) {
    case Family::GaussianIsotropic: return "gaussian-isotropic";
    case Family::Rademacher: return "rademacher";
    case Family::ParetoSphere: return "pareto-sphere";
  }
  throw std::logic_error("unreachable family");
}

double LevyMeasureSpec::density(double x) const {
  if (x <= 0.0) return 0.0;
  return alpha * std::pow(x, -alpha - 1.0);
}

double LevyMeasureSpec::tail(double s) const {
  return std::pow(s, -alpha);
}

double LevyMeasureSpec::scaling(double n) const {
  return std::pow(n, 1.0 / alpha);
}

double LevyMeasureSpec::min1_integral() const {
  return alpha / (1.0 - alpha) + 1.0;
}

double LevyMeasureSpec::truncated_mean_condition(double s, double n) const {
  double cut = s * scaling(n);
  if (cut < 1.0) return 0.0;
  // n * E[R 1{R <= c}] = n * alpha/(1-alpha) * (c^(1-alpha) - 1) for c >= 1,
  // divided by a(n); n / a(n)^alpha = 1 collapses the n dependence.
  return alpha / (1.0 - alpha) * std::pow(s, 1.0 - alpha) *
         (1.0 - std::pow(cut, alpha - 1.0));
}

LevyMeasureSpec IncrementModel::levy() const {
  if (family != Family::ParetoSphere || !alpha) {
    throw std::logic_error("levy(): model has no jump component");
  }
  return LevyMeasureSpec{*alpha};
}

IncrementModel build_model(Family family, std::size_t d,
                           std::optional<double> alpha,
                           std::uint64_t master_seed) {
  if (d == 0) throw ConfigError("increment dimension must be positive");
  if (family == Family::ParetoSphere) {
    if (!alpha) throw ConfigError("pareto-sphere requires a tail index alpha");
    if (!(*alpha > 0.0 && *alpha < 1.0)) {
      throw ConfigError("alpha out of range: must lie in (0, 1)");
    }
  } else if (alpha) {
    throw ConfigError("alpha is only meaningful for pareto-sphere");
  }
  return IncrementModel{family, d, alpha, master_seed};
}

IncrementSampler::IncrementSampler(const IncrementModel& model,
                                   std::uint64_t stream_key)
    : model_(model),
      eng_(rng::engine(model.master_seed, stream_key)),
      normal_(0.0, 1.0),
      unif_(0.0, 1.0),
      inv_sqrt_d_(1.0 / std::sqrt(static_cast<double>(model.d))) {}

void IncrementSampler::next_row(std::span<double> out) {
  const std::size_t d = model_.d;
  switch (model_.family) {
    case Family::GaussianIsotropic:
      // Coordinates i.i.d. N(0, 1/d); E|X|^2 = 1 exactly.
      for (std::size_t j = 0; j < d; ++j) out[j] = normal_(eng_) * inv_sqrt_d_;
      return;
    case Family::Rademacher:
      // Coordinates i.i.d. uniform on {-1/sqrt(d), +1/sqrt(d)}; |X| = 1.
      for (std::size_t j = 0; j < d; ++j) {
        out[j] = (eng_() >> 63) ? inv_sqrt_d_ : -inv_sqrt_d_;
      }
      return;
    case Family::ParetoSphere: {
      // X = sqrt(R) * Theta with Theta uniform on the unit sphere and R
      // Pareto: P(R > x) = x^(-alpha) on [1, inf). |X|^2 = R, so squared
      // norms have exactly the pure-power tail.
      double sq = 0.0;
      for (std::size_t j = 0; j < d; ++j) {
        double g = normal_(eng_);
        out[j] = g;
        sq += g * g;
      }
      double u = unif_(eng_);
      double r = std::pow(1.0 - u, -1.0 / *model_.alpha);
      double norm = std::sqrt(sq);
      // A d-dimensional Gaussian vector is zero with probability zero; guard
      // anyway to keep the row finite.
      double coef = norm > 0.0 ? std::sqrt(r) / norm : 0.0;
      for (std::size_t j = 0; j < d; ++j) out[j] *= coef;
      return;
    }
  }
}

IncrementBatch sample_increments(const IncrementModel& model, std::size_t count,
                                 std::uint64_t stream_key) {
  IncrementSampler sampler(model, stream_key);
  IncrementBatch batch{Matrix(count, model.d)};
  for (std::size_t k = 0; k < count; ++k) sampler.next_row(batch.data.row(k));
  return batch;
}

double distance_scale(const IncrementModel& model, std::size_t n) {
  if (n == 0) throw ConfigError("walk length must be positive");
  double nn = static_cast<double>(n);
  if (model.is_l2()) return 1.0 / std::sqrt(nn);
  return 1.0 / std::sqrt(model.levy().scaling(nn));
}

ConditionDiagnostics condition_diagnostics(const IncrementModel& model) {
  ConditionDiagnostics diag;
  diag.is_l2 = model.is_l2();
  if (diag.is_l2) {
    // Both square-integrable families have i.i.d. coordinates with variance
    // exactly 1/d, which bounds every component second moment uniformly.
    diag.max_component_second_moment = 1.0 / static_cast<double>(model.d);
  } else {
    diag.tail_index = *model.alpha;
  }
  return diag;
}

}  // namespace bridgelab::increments
