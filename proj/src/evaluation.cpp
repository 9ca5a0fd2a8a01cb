#include "smile/evaluation.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "smile/errors.hpp"
#include "smile/parallel.hpp"

namespace smile {

namespace {

void require_same_trace(const RunResult& a, const RunResult& b, const char* what) {
  if (a.truths.rows() != b.truths.rows() || a.truths.cols() != b.truths.cols() || a.truths != b.truths)
    throw ContractViolation(std::string(what) + ": results come from different traces");
}

}  // namespace

Eigen::ArrayXd squared_errors(const RunResult& result) {
  require(result.estimates.cols() > 0, "squared_errors: empty result");
  require(result.estimates.rows() == result.truths.rows() && result.estimates.cols() == result.truths.cols(),
          "squared_errors: estimates and truths are not aligned");
  return (result.estimates - result.truths).colwise().squaredNorm().transpose().array();
}

double mse(const RunResult& result) { return squared_errors(result).mean(); }

std::optional<double> transient_mse(const RunResult& result, int n) {
  require(n >= 1, "transient_mse: n must be >= 1");
  const Eigen::ArrayXd err = squared_errors(result);
  require(static_cast<Eigen::Index>(result.run_lengths.size()) == err.size(),
          "transient_mse: run lengths are not aligned");
  double sum = 0.0;
  long count = 0;
  for (Eigen::Index t = 0; t < err.size(); ++t) {
    if (result.run_lengths[static_cast<std::size_t>(t)] != n) continue;
    sum += err(t);
    ++count;
  }
  if (count == 0) return std::nullopt;
  return sum / static_cast<double>(count);
}

std::vector<std::optional<double>> transient_curve(const RunResult& result, int n_max) {
  require(n_max >= 1, "transient_curve: n_max must be >= 1");
  const Eigen::ArrayXd err = squared_errors(result);
  require(static_cast<Eigen::Index>(result.run_lengths.size()) == err.size(),
          "transient_curve: run lengths are not aligned");
  std::vector<double> sum(static_cast<std::size_t>(n_max), 0.0);
  std::vector<long> count(static_cast<std::size_t>(n_max), 0);
  for (Eigen::Index t = 0; t < err.size(); ++t) {
    const int r = result.run_lengths[static_cast<std::size_t>(t)];
    if (r < 1 || r > n_max) continue;
    sum[static_cast<std::size_t>(r - 1)] += err(t);
    ++count[static_cast<std::size_t>(r - 1)];
  }
  std::vector<std::optional<double>> out(static_cast<std::size_t>(n_max));
  for (std::size_t k = 0; k < out.size(); ++k)
    if (count[k] > 0) out[k] = sum[k] / static_cast<double>(count[k]);
  return out;
}

double delta_mse(const RunResult& alg, const RunResult& exact) {
  require_same_trace(alg, exact, "delta_mse");
  return mse(alg) - mse(exact);
}

double mean_regret(const RunResult& alg_at_assumed, const RunResult& exact_at_true) {
  require_same_trace(alg_at_assumed, exact_at_true, "mean_regret");
  return mse(alg_at_assumed) - mse(exact_at_true);
}

GridSearchResult grid_search(const AlgorithmSpec& base, const EnvConfig& env, const std::vector<double>& grid,
                             int n_seeds, int threads) {
  require(!grid.empty(), "grid_search: empty grid");
  require(n_seeds >= 1, "grid_search: need at least one seed");
  const auto seeds = static_cast<std::size_t>(n_seeds);
  const std::vector<EnvTrace> traces = parallel_map(seeds, threads, [&](std::size_t k) {
    EnvConfig cfg = env;
    cfg.seed = env.seed + k;
    return simulate(cfg);
  });
  const RunOptions lean{false, false};
  const std::vector<double> errors = parallel_map(grid.size() * seeds, threads, [&](std::size_t job) {
    AlgorithmSpec spec = base;
    spec.param = grid[job / seeds];
    const std::size_t k = job % seeds;
    return mse(run(spec, env.model, traces[k], env.seed + k, lean));
  });

  GridSearchResult out{grid.front(), {}};
  double best_mse = std::numeric_limits<double>::infinity();
  for (std::size_t g = 0; g < grid.size(); ++g) {
    double total = 0.0;
    for (std::size_t k = 0; k < seeds; ++k) total += errors[g * seeds + k];
    const double mean = total / static_cast<double>(seeds);
    out.table.push_back({grid[g], mean});
    if (mean < best_mse || (mean == best_mse && grid[g] < out.best)) {
      best_mse = mean;
      out.best = grid[g];
    }
  }
  return out;
}

std::vector<double> m_grid() {
  std::vector<double> grid;
  for (int k = -12; k <= 6; ++k) grid.push_back(std::pow(10.0, k / 3.0));
  return grid;
}

std::vector<double> omega_grid() {
  return {0.5, 0.6, 0.7, 0.8, 0.85, 0.9, 0.95, 0.97, 0.98, 0.99, 0.999, 0.9999, 1.0};
}

std::vector<double> change_probability_levels() { return {0.1, 0.05, 0.01, 0.005, 0.001, 0.0001}; }

std::vector<double> change_probability_grid() {
  std::vector<double> grid;
  for (int k = -12; k <= -1; ++k) grid.push_back(std::pow(10.0, k / 3.0));
  return grid;
}

std::vector<double> default_grid(Algorithm kind) {
  switch (kind) {
    case Algorithm::VarSmile:
    case Algorithm::Smile: return m_grid();
    case Algorithm::Leaky: return omega_grid();
    case Algorithm::Nas10:
    case Algorithm::Nas12: return change_probability_grid();
    default: return change_probability_levels();
  }
}

}  // namespace smile
