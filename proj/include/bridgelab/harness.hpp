#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "bridgelab/increments.hpp"
#include "bridgelab/limits.hpp"
#include "bridgelab/walks.hpp"

namespace bridgelab::harness {

enum class StudyKind { Lemma1, Theorem1, Theorem2, Truncation, Angular };

StudyKind study_from_string(const std::string& name);
std::string to_string(StudyKind kind);

// Scalar functional of a grid distance matrix, used to compare empirical and
// limit distributions. Which functionals characterize the limit is a
// modeling choice, not a derived fact; the resolved choice is echoed into
// resolved_config.json and the statistic names carry it.
struct Functional {
  enum class Kind { Diameter, Entry };
  Kind kind = Kind::Diameter;
  std::size_t i = 0, j = 0;  // grid indices, Entry only

  std::string name() const;
  double eval(const walks::DistanceMatrix& dm) const;
};

// Default trio: diameter, entry (0, m/2), entry (m/4, 3m/4).
std::vector<Functional> default_functionals(std::size_t m);

struct StudyConfig {
  StudyKind study = StudyKind::Theorem1;
  increments::Family family = increments::Family::GaussianIsotropic;
  std::optional<double> alpha;
  std::vector<std::pair<std::size_t, std::size_t>> schedule;  // (d, n)
  std::size_t m = 1;
  std::size_t trials = 1;
  std::vector<double> t_list{0.5};
  std::vector<double> epsilon_list{0.1};
  std::vector<double> s_list{0.1, 0.01, 0.001};
  double eps_subordinator = 1e-6;
  std::uint64_t seed = 0;
  std::vector<Functional> functionals;  // empty means default_functionals(m)

  std::vector<Functional> resolved_functionals() const;
  // Throws ConfigError on any violated invariant (empty schedule, m beyond
  // the smallest n, family incompatible with the study, ...).
  void validate() const;
};

struct TrialRecord {
  std::size_t d = 0;
  std::size_t n = 0;
  long long trial = 0;  // -1 marks aggregate rows
  std::string statistic;
  double value = 0.0;
};

// Emission-ordered rows: per schedule point, first the per-trial rows (trial
// ascending, statistics in a fixed per-study order), then any limit-sample
// rows, then aggregates (median, p90, exceedance fractions, KS) with
// trial = -1.
struct ConvergenceReport {
  StudyConfig config;
  std::vector<TrialRecord> rows;
};

struct KsResult {
  double statistic = 0.0;
  std::size_t nx = 0, ny = 0;
};

// Exact two-sample Kolmogorov-Smirnov statistic via a merge scan of the two
// sorted samples.
KsResult ks_two_sample(std::span<const double> xs, std::span<const double> ys);

// Linear-interpolation quantile (the common "type 7" rule); sorts a copy.
double quantile(std::vector<double> values, double p);

ConvergenceReport run_lemma1_check(const StudyConfig& config, std::size_t workers = 1);
ConvergenceReport run_theorem1_study(const StudyConfig& config, std::size_t workers = 1);
ConvergenceReport run_theorem2_study(const StudyConfig& config, std::size_t workers = 1);
ConvergenceReport run_truncation_study(const StudyConfig& config, std::size_t workers = 1);
ConvergenceReport run_angular_check(const StudyConfig& config, std::size_t workers = 1);

// Dispatches on config.study.
ConvergenceReport run_study(const StudyConfig& config, std::size_t workers = 1);

// Lookup helpers over the emitted rows.
const TrialRecord* find_row(const ConvergenceReport& report, std::size_t d,
                            std::size_t n, long long trial,
                            const std::string& statistic);
std::vector<double> trial_values(const ConvergenceReport& report, std::size_t d,
                                 std::size_t n, const std::string& statistic);

// Substream keys. Every random object in a study is addressed by
// (study, schedule point, role, index); the CLI matrix subcommand reuses
// the role-0/index-0 stream so its output equals the study's first trial.
std::uint64_t stream_key(StudyKind study, std::size_t point_idx,
                         std::uint64_t role, std::uint64_t index);
inline constexpr std::uint64_t kRoleTrial = 0;
inline constexpr std::uint64_t kRoleStmtSample = 1;
inline constexpr std::uint64_t kRoleEmbSample = 2;

// Streaming prefix-sum snapshots: row r = S_{indices[r]} of the walk driven
// by the model's substream. indices must be ascending and unique; summation
// order matches walks::cumulate bitwise.
Matrix path_snapshots(const increments::IncrementModel& model, std::size_t n,
                      std::span<const std::size_t> indices,
                      std::uint64_t stream_key);

// Pinned cloud on the grid floor(n*i/m), i = 0..m, streamed without
// materializing the walk; bitwise equal to subsample_grid over bridge_of
// over cumulate of the same substream.
walks::BridgeCloud grid_bridge_cloud(const increments::IncrementModel& model,
                                     std::size_t n, std::size_t m,
                                     std::uint64_t stream_key);

}  // namespace bridgelab::harness
