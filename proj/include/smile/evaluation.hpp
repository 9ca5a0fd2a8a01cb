#pragma once

#include <optional>
#include <vector>

#include <Eigen/Core>

#include "smile/environment.hpp"
#include "smile/runner.hpp"

namespace smile {

/// Per-step squared Euclidean error between estimate and truth.
Eigen::ArrayXd squared_errors(const RunResult& result);

/// Time-averaged squared error.
double mse(const RunResult& result);

/// Squared error averaged over the steps with run length exactly n; empty when none.
std::optional<double> transient_mse(const RunResult& result, int n);

/// transient_mse for n = 1..n_max in one pass.
std::vector<std::optional<double>> transient_curve(const RunResult& result, int n_max);

/// mse(alg) - mse(exact) on the same trace.
double delta_mse(const RunResult& alg, const RunResult& exact);

/// MSE of a learner run at an assumed p_c' minus the matched exact MSE.
double mean_regret(const RunResult& alg_at_assumed, const RunResult& exact_at_true);

struct GridPoint {
  double param;
  double mse;
};

struct GridSearchResult {
  double best;
  std::vector<GridPoint> table;
};

/// Picks the grid value minimizing the mean MSE over `n_seeds` traces drawn
/// with seeds env.seed, env.seed + 1, ...; ties go to the smaller value.
GridSearchResult grid_search(const AlgorithmSpec& base, const EnvConfig& env, const std::vector<double>& grid,
                             int n_seeds = 3, int threads = 1);

/// m in {10^k : k = -4..2} in 1/3-decade steps.
std::vector<double> m_grid();
/// Leak values from strong forgetting to none.
std::vector<double> omega_grid();
/// The benchmark's six change-probability levels, largest first.
std::vector<double> change_probability_levels();
/// Change probabilities 10^(k/3) for k = -12..-1, used to tune the Nas rules.
std::vector<double> change_probability_grid();
/// Default tuning grid for an algorithm kind.
std::vector<double> default_grid(Algorithm kind);

}  // namespace smile
