#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "smile/environment.hpp"
#include "smile/runner.hpp"

namespace smile {

/// Tuning traces start this far above the evaluation seed so the two never share a trace.
inline constexpr std::uint64_t kTuningSeedOffset = 1000003;

/// Weight cut-off for exact references on long horizons.  Components below
/// machine epsilon cannot move a normalized posterior mean.
inline constexpr double kPracticalCutoff = 2.220446049250313e-16;

/// Fills in `spec.param`: the environment's p_c for ExactBayes, MP-N and
/// PF-N; otherwise the minimizer of a grid search on `tune_seeds` traces
/// seeded from env.seed + kTuningSeedOffset.
AlgorithmSpec resolve_parameter(AlgorithmSpec spec, const EnvConfig& env, int tune_seeds = 3, int threads = 1);

struct SampleSummary {
  double mean;
  double sem;  // NaN for fewer than two values
};

SampleSummary summarize_sample(const Eigen::Ref<const Eigen::ArrayXd>& values);

struct CellReport {
  std::vector<AlgorithmSpec> algorithms;
  Eigen::MatrixXd mse;        // algorithms x seeds
  Eigen::MatrixXd delta_mse;  // algorithms x seeds
  Eigen::VectorXd exact_mse;  // per seed
  /// Squared error pooled over all seeds at run length n = 1..n_max.
  std::vector<std::vector<std::optional<double>>> transient;
  std::vector<std::optional<double>> exact_transient;
};

/// Runs each (already resolved) algorithm and an ExactBayes reference at the
/// true p_c on traces seeded env.seed, env.seed + 1, ...
CellReport benchmark_cell(const std::vector<AlgorithmSpec>& algorithms, const EnvConfig& env, int n_seeds, int n_max,
                          double reference_cutoff = kPracticalCutoff, int threads = 1);

struct RegretCurve {
  std::vector<double> p_true;
  Eigen::MatrixXd regret;  // p_true x seeds
};

/// MSE of `algorithm` (parameters held fixed) minus the matched ExactBayes
/// MSE, for each true p_c in `p_true`, on traces seeded env.seed + k.
RegretCurve regret_curve(const AlgorithmSpec& algorithm, const EnvConfig& env, const std::vector<double>& p_true,
                         int n_seeds, double reference_cutoff = kPracticalCutoff, int threads = 1);

}  // namespace smile
