#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "bridgelab/limits.hpp"
#include "support/oracles.hpp"

using namespace bridgelab;
using limits::MetricKind;

namespace {

limits::SubordinatorSample fixed_sample(std::vector<limits::Atom> atoms) {
  limits::SubordinatorSample s;
  s.alpha = 0.5;
  s.eps = 1e-6;
  double z = 0.0;
  for (const auto& a : atoms) z += a.y;
  s.atoms = std::move(atoms);
  s.zeta1 = z;
  return s;
}

}  // namespace

TEST_CASE("parabolic bridge metric evaluates its formula") {
  CHECK(limits::wiener_bridge_metric(0.0, 1.0) == 0.0);
  CHECK(limits::wiener_bridge_metric(0.0, 0.5) == 0.5);
  CHECK(limits::wiener_bridge_metric(0.3, 0.3) == 0.0);
  CHECK(limits::wiener_bridge_metric(0.25, 0.75) ==
        doctest::Approx(std::sqrt(0.25)).epsilon(1e-15));
  CHECK(limits::wiener_bridge_metric(0.2, 0.8) ==
        limits::wiener_bridge_metric(0.8, 0.2));
  CHECK_THROWS(limits::wiener_bridge_metric(-0.1, 0.5));
  CHECK_THROWS(limits::wiener_bridge_metric(0.0, 1.5));
}

TEST_CASE("atom sampling is validated, sorted, truncated and reproducible") {
  CHECK_THROWS_AS(limits::sample_subordinator(1.5, 1e-3, 1, 0), ConfigError);
  CHECK_THROWS_AS(limits::sample_subordinator(0.5, 0.0, 1, 0), ConfigError);

  auto s = limits::sample_subordinator(0.5, 1e-4, 42, 7);
  CHECK(std::is_sorted(s.atoms.begin(), s.atoms.end(),
                       [](const auto& a, const auto& b) { return a.x < b.x; }));
  double z = 0.0;
  for (const auto& a : s.atoms) {
    CHECK(a.y > 1e-4);
    CHECK(a.x >= 0.0);
    CHECK(a.x <= 1.0);
    z += a.y;
  }
  CHECK(s.zeta1 >= z * (1 - 1e-12));

  auto again = limits::sample_subordinator(0.5, 1e-4, 42, 7);
  CHECK(again.zeta1 == s.zeta1);
  CHECK(again.atoms.size() == s.atoms.size());
  auto other = limits::sample_subordinator(0.5, 1e-4, 42, 8);
  CHECK(other.zeta1 != s.zeta1);
}

TEST_CASE("atom counts above one behave like a unit-rate Poisson count") {
  // tail mass above y=1 is exactly 1 for alpha=0.5
  std::vector<double> counts;
  for (std::uint64_t k = 0; k < 1000; ++k) {
    auto s = limits::sample_subordinator(0.5, 0.9, 2025, k);
    double c = 0.0;
    for (const auto& a : s.atoms) c += (a.y > 1.0) ? 1.0 : 0.0;
    counts.push_back(c);
  }
  auto [mean, se] = oracles::mean_se(counts);
  CHECK(mean > 0.9);
  CHECK(mean < 1.1);
  CHECK(se < 0.05);
}

TEST_CASE("a coarse truncation level can empty the atom list") {
  // stopping threshold 100^{-1/2} = 0.1; the first arrival usually exceeds it
  bool found_empty = false;
  for (std::uint64_t k = 0; k < 50 && !found_empty; ++k) {
    auto s = limits::sample_subordinator(0.5, 100.0, 7, k);
    if (s.atoms.empty()) {
      CHECK(s.zeta1 == 0.0);
      found_empty = true;
    }
  }
  CHECK(found_empty);
}

TEST_CASE("the running jump sum is an inclusive step function") {
  auto s1 = fixed_sample({{0.3, 2.0}});
  CHECK(limits::zeta_at(s1, 0.2) == 0.0);
  CHECK(limits::zeta_at(s1, 0.5) == 2.0);
  CHECK(limits::zeta_at(s1, 0.3) == 2.0);
  CHECK(limits::zeta_at(s1, 1.0) == s1.zeta1);

  auto s2 = fixed_sample({{0.2, 1.0}, {0.7, 3.0}});
  CHECK(limits::zeta_at(s2, 0.7) == 4.0);
  CHECK(limits::zeta_at(s2, 0.69) == 1.0);

  auto drawn = limits::sample_subordinator(0.5, 1e-3, 3, 3);
  CHECK(limits::zeta_at(drawn, 1.0) == drawn.zeta1);
  double prev = 0.0;
  for (int i = 0; i <= 20; ++i) {
    double z = limits::zeta_at(drawn, i / 20.0);
    CHECK(z >= prev);
    prev = z;
  }
}

TEST_CASE("the two jump metrics disagree on a single atom") {
  auto s = fixed_sample({{0.3, 2.0}});
  CHECK(limits::limit_metric(MetricKind::SubordinatorStmt, &s, 0.0, 0.5) ==
        doctest::Approx(1.0).epsilon(1e-15));
  CHECK(limits::limit_metric(MetricKind::SubordinatorEmb, &s, 0.0, 0.5) ==
        doctest::Approx(std::sqrt(0.5)).epsilon(1e-15));
  CHECK(limits::limit_metric(MetricKind::SubordinatorPlain, &s, 0.0, 0.5) ==
        doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
  for (MetricKind kind : {MetricKind::SubordinatorPlain, MetricKind::SubordinatorStmt,
                          MetricKind::SubordinatorEmb}) {
    CHECK(limits::limit_metric(kind, &s, 0.4, 0.4) == 0.0);
    CHECK(limits::limit_metric(kind, &s, 0.1, 0.9) ==
          limits::limit_metric(kind, &s, 0.9, 0.1));
    CHECK_THROWS(limits::limit_metric(kind, nullptr, 0.0, 0.5));
  }
  CHECK(limits::limit_metric(MetricKind::WienerBridge, nullptr, 0.0, 0.5) == 0.5);
}

TEST_CASE("metric kind names round-trip") {
  for (MetricKind k : {MetricKind::WienerBridge, MetricKind::SubordinatorPlain,
                       MetricKind::SubordinatorStmt, MetricKind::SubordinatorEmb}) {
    CHECK(limits::metric_kind_from_string(limits::to_string(k)) == k);
  }
  CHECK_THROWS_AS(limits::metric_kind_from_string("euclid"), ConfigError);
}

TEST_CASE("grid matrices of the limit metrics") {
  auto dm = limits::limit_distance_matrix(MetricKind::WienerBridge, nullptr, 2);
  CHECK(dm.size() == 3);
  CHECK(dm.entries(0, 1) == 0.5);
  CHECK(dm.entries(0, 2) == 0.0);
  CHECK(dm.entries(1, 2) == 0.5);
  CHECK(dm.entries(0, 0) == 0.0);

  auto empty = fixed_sample({});
  for (MetricKind kind : {MetricKind::WienerBridge, MetricKind::SubordinatorPlain,
                          MetricKind::SubordinatorStmt, MetricKind::SubordinatorEmb}) {
    auto two = limits::limit_distance_matrix(kind, &empty, 1);
    CHECK(two.size() == 2);
    CHECK(two.entries(0, 1) == 0.0);  // both ends are the identified endpoint
  }
  auto plain = limits::limit_distance_matrix(MetricKind::SubordinatorPlain, &empty, 5);
  for (std::size_t i = 0; i < plain.size(); ++i) {
    for (std::size_t j = 0; j < plain.size(); ++j) CHECK(plain.entries(i, j) == 0.0);
  }
}

TEST_CASE("limit grid matrices satisfy the metric axioms tightly") {
  auto s = limits::sample_subordinator(0.5, 1e-5, 11, 0);
  for (MetricKind kind : {MetricKind::WienerBridge, MetricKind::SubordinatorPlain,
                          MetricKind::SubordinatorStmt, MetricKind::SubordinatorEmb}) {
    auto dm = limits::limit_distance_matrix(kind, &s, 16);
    const std::size_t n = dm.size();
    for (std::size_t i = 0; i < n; ++i) {
      CHECK(dm.entries(i, i) == 0.0);
      for (std::size_t j = 0; j < n; ++j) {
        CHECK(dm.entries(i, j) == dm.entries(j, i));
        for (std::size_t k = 0; k < n; ++k) {
          CHECK(dm.entries(i, j) <= dm.entries(i, k) + dm.entries(k, j) + 1e-12);
        }
      }
    }
  }
}

TEST_CASE("under a linear jump sum the embedded metric reduces to the parabola") {
  for (int k = 0; k <= 16; ++k) {
    const double u = k / 16.0;
    auto probe = limits::deterministic_consistency(u);
    CHECK(probe.emb_value == limits::wiener_bridge_metric(0.0, u));
    CHECK(probe.stmt_value == 0.0);
  }
  auto mid = limits::deterministic_consistency(0.5);
  CHECK(mid.emb_value == 0.5);
  auto quarter = limits::deterministic_consistency(0.25);
  CHECK(quarter.emb_value == doctest::Approx(std::sqrt(0.1875)).epsilon(1e-15));
  auto zero = limits::deterministic_consistency(0.0);
  CHECK(zero.emb_value == 0.0);
  CHECK(zero.stmt_value == 0.0);
}

TEST_CASE("mass removed by tightening the truncation matches the analytic bias") {
  // same stream: the coarser level keeps a prefix of the finer level's jumps,
  // so the per-stream difference isolates the atoms between the two levels
  const double eps_fine = 1e-3, eps_coarse = 1e-1;
  const double expect = limits::truncation_bias_mean(0.5, eps_coarse) -
                        limits::truncation_bias_mean(0.5, eps_fine);
  std::vector<double> diffs;
  for (std::uint64_t k = 0; k < 2000; ++k) {
    auto fine = limits::sample_subordinator(0.5, eps_fine, 77, k);
    auto coarse = limits::sample_subordinator(0.5, eps_coarse, 77, k);
    diffs.push_back(fine.zeta1 - coarse.zeta1);
  }
  auto [mean, se] = oracles::mean_se(diffs);
  CHECK(std::abs(mean - expect) < 4 * se);
}

TEST_CASE("half-stable distribution function spot values") {
  CHECK(limits::stable_half_cdf(3.14159265358979312 / 4.0) ==
        doctest::Approx(std::erfc(1.0)).epsilon(1e-15));
  CHECK(limits::stable_half_cdf(1e-12) < 1e-6);
  double prev = 0.0;
  for (double x : {0.1, 0.5, 1.0, 5.0, 50.0, 5000.0}) {
    double v = limits::stable_half_cdf(x);
    CHECK(v > prev);
    CHECK(v < 1.0);
    prev = v;
  }
  CHECK(prev > 0.97);
}

TEST_CASE("total jump sums track the half-stable law") {
  // quick distributional check; the full-size version lives in the
  // acceptance suite with its calibrated threshold
  std::vector<double> z;
  for (std::uint64_t k = 0; k < 300; ++k) {
    z.push_back(limits::sample_subordinator(0.5, 1e-6, 123, k).zeta1);
  }
  std::sort(z.begin(), z.end());
  double ks = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    const double f = limits::stable_half_cdf(z[i]);
    const double lo = static_cast<double>(i) / z.size();
    const double hi = static_cast<double>(i + 1) / z.size();
    ks = std::max({ks, std::abs(f - lo), std::abs(f - hi)});
  }
  CHECK(ks < 0.1);
}
