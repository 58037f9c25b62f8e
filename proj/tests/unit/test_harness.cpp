#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "bridgelab/csv.hpp"
#include "bridgelab/harness.hpp"
#include "bridgelab/walks.hpp"

using namespace bridgelab;
using harness::StudyConfig;
using harness::StudyKind;
using increments::Family;

namespace {

StudyConfig base_config(StudyKind kind, Family family) {
  StudyConfig c;
  c.study = kind;
  c.family = family;
  if (family == Family::ParetoSphere) c.alpha = 0.5;
  c.schedule = {{8, 24}, {16, 48}};
  c.m = 6;
  c.trials = 5;
  c.seed = 101;
  return c;
}

}  // namespace

TEST_CASE("two-sample KS by merge scan") {
  std::vector<double> a{1, 2, 3};
  CHECK(harness::ks_two_sample(a, a).statistic == 0.0);
  std::vector<double> zeros{0, 0}, ones{1, 1};
  CHECK(harness::ks_two_sample(zeros, ones).statistic == 1.0);
  std::vector<double> xs{1, 2}, ys{1, 2, 3};
  CHECK(harness::ks_two_sample(xs, ys).statistic == doctest::Approx(1.0 / 3));
  std::vector<double> empty;
  CHECK_THROWS(harness::ks_two_sample(empty, ys));
  // unsorted input is sorted internally
  std::vector<double> shuffled{3, 1, 2};
  CHECK(harness::ks_two_sample(shuffled, a).statistic == 0.0);
}

TEST_CASE("quantiles interpolate between order statistics") {
  CHECK(harness::quantile({1, 2, 3, 4}, 0.5) == 2.5);
  CHECK(harness::quantile({4, 3, 2, 1}, 0.5) == 2.5);
  CHECK(harness::quantile({1, 2, 3, 4, 5, 6, 7, 8, 9, 10}, 0.9) ==
        doctest::Approx(9.1).epsilon(1e-12));
  CHECK(harness::quantile({7}, 0.5) == 7.0);
  CHECK(harness::quantile({1, 3}, 0.0) == 1.0);
  CHECK(harness::quantile({1, 3}, 1.0) == 3.0);
}

TEST_CASE("study names round-trip") {
  for (StudyKind k : {StudyKind::Lemma1, StudyKind::Theorem1, StudyKind::Theorem2,
                      StudyKind::Truncation, StudyKind::Angular}) {
    CHECK(harness::study_from_string(harness::to_string(k)) == k);
  }
  CHECK_THROWS_AS(harness::study_from_string("theorem3"), ConfigError);
}

TEST_CASE("config validation rejects inconsistent studies") {
  auto ok = base_config(StudyKind::Theorem1, Family::GaussianIsotropic);
  CHECK_NOTHROW(ok.validate());

  auto no_sched = ok;
  no_sched.schedule.clear();
  CHECK_THROWS_AS(no_sched.validate(), ConfigError);

  auto big_m = ok;
  big_m.m = 25;  // exceeds the smaller schedule n of 24
  CHECK_THROWS_AS(big_m.validate(), ConfigError);

  auto wrong_family = base_config(StudyKind::Lemma1, Family::ParetoSphere);
  CHECK_THROWS_WITH_AS(wrong_family.validate(),
                       doctest::Contains("square-integrable"), ConfigError);
  CHECK_THROWS_AS(base_config(StudyKind::Theorem2, Family::Rademacher).validate(),
                  ConfigError);
  CHECK_THROWS_AS(base_config(StudyKind::Truncation, Family::GaussianIsotropic)
                      .validate(),
                  ConfigError);

  auto bad_t = base_config(StudyKind::Lemma1, Family::Rademacher);
  bad_t.t_list = {0.5, 1.5};
  CHECK_THROWS_AS(bad_t.validate(), ConfigError);

  auto bad_s = base_config(StudyKind::Truncation, Family::ParetoSphere);
  bad_s.s_list = {0.01, 0.1};  // must descend
  CHECK_THROWS_AS(bad_s.validate(), ConfigError);

  auto bad_alpha = base_config(StudyKind::Theorem2, Family::ParetoSphere);
  bad_alpha.alpha = 1.0;
  CHECK_THROWS_AS(bad_alpha.validate(), ConfigError);

  auto bad_fn = base_config(StudyKind::Theorem2, Family::ParetoSphere);
  bad_fn.functionals = {
      harness::Functional{harness::Functional::Kind::Entry, 0, 7}};  // j > m
  CHECK_THROWS_AS(bad_fn.validate(), ConfigError);

  auto zero_trials = ok;
  zero_trials.trials = 0;
  CHECK_THROWS_AS(zero_trials.validate(), ConfigError);
}

TEST_CASE("default functionals probe the diameter and two grid entries") {
  auto fns = harness::default_functionals(20);
  REQUIRE(fns.size() == 3);
  CHECK(fns[0].name() == "diameter");
  CHECK(fns[1].name() == "entry_0_10");
  CHECK(fns[2].name() == "entry_5_15");

  walks::DistanceMatrix dm;
  dm.entries = Matrix(21, 21);
  dm.entries(0, 10) = 0.4;
  dm.entries(5, 15) = 0.9;
  CHECK(fns[0].eval(dm) == 0.9);
  CHECK(fns[1].eval(dm) == 0.4);
  CHECK(fns[2].eval(dm) == 0.9);
}

TEST_CASE("substream keys separate studies, points, roles and indices") {
  std::set<std::uint64_t> keys;
  for (StudyKind st : {StudyKind::Lemma1, StudyKind::Theorem2}) {
    for (std::size_t pt = 0; pt < 3; ++pt) {
      for (int role : {harness::kRoleTrial, harness::kRoleStmtSample,
                       harness::kRoleEmbSample}) {
        for (std::size_t idx = 0; idx < 50; ++idx) {
          keys.insert(harness::stream_key(st, pt, role, idx));
        }
      }
    }
  }
  CHECK(keys.size() == 2 * 3 * 3 * 50);
}

TEST_CASE("streaming snapshots match the materialized walk bitwise") {
  auto model = increments::build_model(Family::GaussianIsotropic, 9, {}, 55);
  const std::size_t n = 40;
  const std::uint64_t key = harness::stream_key(StudyKind::Lemma1, 1,
                                                harness::kRoleTrial, 2);
  auto batch = increments::sample_increments(model, n, key);
  auto path = walks::cumulate(batch);

  std::vector<std::size_t> indices{0, 7, 20, 33, 40};
  Matrix snaps = harness::path_snapshots(model, n, indices, key);
  REQUIRE(snaps.rows() == indices.size());
  for (std::size_t r = 0; r < indices.size(); ++r) {
    for (std::size_t k = 0; k < 9; ++k) {
      CHECK(snaps(r, k) == path.points(indices[r], k));
    }
  }

  auto grid = harness::grid_bridge_cloud(model, n, 8, key);
  auto expect = walks::subsample_grid(walks::bridge_of(path), 8);
  CHECK(grid.points == expect.points);
}

TEST_CASE("first study: zero time pins the statistic at zero") {
  auto c = base_config(StudyKind::Lemma1, Family::Rademacher);
  c.t_list = {0.0, 0.5};
  auto report = harness::run_lemma1_check(c);
  for (const auto& [d, n] : c.schedule) {
    auto zeros = harness::trial_values(report, d, n, "abs_dev_t0");
    REQUIRE(zeros.size() == c.trials);
    for (double v : zeros) CHECK(v == 0.0);
    auto mids = harness::trial_values(report, d, n, "abs_dev_t0.5");
    REQUIRE(mids.size() == c.trials);
    for (double v : mids) {
      CHECK(v > 0.0);
      CHECK(v < 1.0);
    }
    CHECK(harness::find_row(report, d, n, -1, "abs_dev_t0.5_median") != nullptr);
    CHECK(harness::find_row(report, d, n, -1, "abs_dev_t0.5_p90") != nullptr);
  }
}

TEST_CASE("second study: trivial grid gives exactly zero deviation") {
  auto c = base_config(StudyKind::Theorem1, Family::GaussianIsotropic);
  c.m = 1;
  auto report = harness::run_theorem1_study(c);
  for (const auto& [d, n] : c.schedule) {
    for (double v : harness::trial_values(report, d, n, "sup_deviation")) {
      CHECK(v == 0.0);
    }
  }
}

TEST_CASE("second study: the grid bound is half the sup deviation, per trial") {
  auto c = base_config(StudyKind::Theorem1, Family::GaussianIsotropic);
  c.epsilon_list = {0.1, 0.4};
  auto report = harness::run_theorem1_study(c);
  for (const auto& [d, n] : c.schedule) {
    auto sup = harness::trial_values(report, d, n, "sup_deviation");
    auto upper = harness::trial_values(report, d, n, "gh_upper");
    REQUIRE(sup.size() == c.trials);
    REQUIRE(upper.size() == c.trials);
    for (std::size_t t = 0; t < sup.size(); ++t) {
      CHECK(upper[t] == 0.5 * sup[t]);
      CHECK(sup[t] > 0.0);
    }
    // exceedance rows exist for both statistics at both thresholds
    for (const char* stat : {"sup_deviation_exceed_0.1", "sup_deviation_exceed_0.4",
                             "gh_upper_exceed_0.1", "gh_upper_exceed_0.4"}) {
      const auto* row = harness::find_row(report, d, n, -1, stat);
      REQUIRE(row != nullptr);
      CHECK(row->value >= 0.0);
      CHECK(row->value <= 1.0);
    }
  }
}

TEST_CASE("third study reports one distribution per functional and metric") {
  auto c = base_config(StudyKind::Theorem2, Family::ParetoSphere);
  auto report = harness::run_theorem2_study(c);
  const auto [d, n] = c.schedule.back();
  int ks_rows = 0;
  for (const auto& row : report.rows) {
    if (row.d == d && row.n == n && row.trial == -1 &&
        row.statistic.rfind("ks_", 0) == 0) {
      ++ks_rows;
      CHECK(row.value >= 0.0);
      CHECK(row.value <= 1.0);
    }
  }
  CHECK(ks_rows == 6);  // three functionals, compared against both limit laws

  for (const char* stat : {"diameter", "entry_0_3", "entry_1_4"}) {
    CHECK(harness::trial_values(report, d, n, stat).size() == c.trials);
    CHECK(harness::trial_values(report, d, n, std::string(stat) + "_stmt").size() ==
          c.trials);
    CHECK(harness::trial_values(report, d, n, std::string(stat) + "_emb").size() ==
          c.trials);
  }
}

TEST_CASE("third study: an endpoint functional is identically zero on both sides") {
  auto c = base_config(StudyKind::Theorem2, Family::ParetoSphere);
  c.functionals = {harness::Functional{harness::Functional::Kind::Entry, 0, 6}};
  auto report = harness::run_theorem2_study(c);
  const auto [d, n] = c.schedule.front();
  for (const char* stat : {"entry_0_6", "entry_0_6_stmt", "entry_0_6_emb"}) {
    for (double v : harness::trial_values(report, d, n, stat)) CHECK(v == 0.0);
  }
  const auto* ks = harness::find_row(report, d, n, -1, "ks_entry_0_6_vs_stmt");
  REQUIRE(ks != nullptr);
  CHECK(ks->value == 0.0);
}

TEST_CASE("fourth study: a zero level keeps every increment") {
  auto c = base_config(StudyKind::Truncation, Family::ParetoSphere);
  c.s_list = {0.05, 0.0};
  auto report = harness::run_truncation_study(c);
  for (const auto& [d, n] : c.schedule) {
    auto at_zero = harness::trial_values(report, d, n, "scaled_dh_s0");
    REQUIRE(at_zero.size() == c.trials);
    for (double v : at_zero) CHECK(v == 0.0);
    for (double v : harness::trial_values(report, d, n, "scaled_dh_s0.05")) {
      CHECK(v >= 0.0);
      CHECK(std::isfinite(v));
    }
  }
}

TEST_CASE("fifth study: one dimension forces unit cosines") {
  StudyConfig c;
  c.study = StudyKind::Angular;
  c.family = Family::ParetoSphere;
  c.alpha = 0.5;
  c.schedule = {{1, 4}, {64, 4}};
  c.trials = 40;
  c.seed = 3;
  auto report = harness::run_angular_check(c);
  for (double v : harness::trial_values(report, 1, 4, "abs_cos")) CHECK(v == 1.0);
  auto hi = harness::trial_values(report, 64, 4, "abs_cos");
  REQUIRE(hi.size() == 40);
  for (double v : hi) {
    CHECK(v >= 0.0);
    CHECK(v <= 1.0);
  }
  CHECK(harness::quantile(hi, 0.5) < 0.5);
  const auto* vac = harness::find_row(report, 1, 4, -1, "conditioning_vacuous");
  REQUIRE(vac != nullptr);
  CHECK(vac->value == 1.0);
}

TEST_CASE("reports are byte-identical across worker counts and reruns") {
  for (StudyKind kind : {StudyKind::Lemma1, StudyKind::Theorem1, StudyKind::Theorem2,
                         StudyKind::Truncation, StudyKind::Angular}) {
    const Family family = (kind == StudyKind::Lemma1 || kind == StudyKind::Theorem1)
                              ? Family::Rademacher
                              : Family::ParetoSphere;
    auto c = base_config(kind, family);
    c.trials = 7;
    auto one = csv::report_to_string(harness::run_study(c, 1));
    auto rerun = csv::report_to_string(harness::run_study(c, 1));
    auto three = csv::report_to_string(harness::run_study(c, 3));
    CHECK(one == rerun);
    CHECK(one == three);
  }
}

TEST_CASE("row counts are structural") {
  auto c = base_config(StudyKind::Lemma1, Family::Rademacher);
  c.t_list = {0.25, 0.5};
  auto report = harness::run_lemma1_check(c);
  // per schedule point: trials rows per t, plus median and p90 aggregates per t
  const std::size_t expect =
      c.schedule.size() * c.t_list.size() * (c.trials + 2);
  CHECK(report.rows.size() == expect);
}
