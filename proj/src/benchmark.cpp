#include "smile/benchmark.hpp"

#include <cmath>
#include <limits>

#include "smile/errors.hpp"
#include "smile/evaluation.hpp"
#include "smile/parallel.hpp"

namespace smile {

namespace {

struct RunStats {
  double mse = 0.0;
  std::vector<double> sum;
  std::vector<long> count;
};

RunStats run_stats(const AlgorithmSpec& spec, const EnvConfig& env, const EnvTrace& trace, std::uint64_t seed,
                   int n_max) {
  const RunResult res = run(spec, env.model, trace, seed, RunOptions{false, false});
  const Eigen::ArrayXd err = squared_errors(res);
  RunStats s;
  s.mse = err.mean();
  s.sum.assign(static_cast<std::size_t>(n_max), 0.0);
  s.count.assign(static_cast<std::size_t>(n_max), 0);
  for (Eigen::Index t = 0; t < err.size(); ++t) {
    const int r = trace.run_lengths[static_cast<std::size_t>(t)];
    if (r > n_max) continue;
    s.sum[static_cast<std::size_t>(r - 1)] += err(t);
    ++s.count[static_cast<std::size_t>(r - 1)];
  }
  return s;
}

std::vector<std::optional<double>> pool(const std::vector<RunStats>& stats, std::size_t first, std::size_t n,
                                        int n_max) {
  std::vector<std::optional<double>> out(static_cast<std::size_t>(n_max));
  for (std::size_t k = 0; k < out.size(); ++k) {
    double sum = 0.0;
    long count = 0;
    for (std::size_t j = first; j < first + n; ++j) {
      sum += stats[j].sum[k];
      count += stats[j].count[k];
    }
    if (count > 0) out[k] = sum / static_cast<double>(count);
  }
  return out;
}

std::vector<EnvTrace> simulate_seeds(const EnvConfig& env, int n_seeds, int threads) {
  return parallel_map(static_cast<std::size_t>(n_seeds), threads, [&](std::size_t k) {
    EnvConfig cfg = env;
    cfg.seed = env.seed + k;
    return simulate(cfg);
  });
}

AlgorithmSpec exact_reference(double p_c, double cutoff) {
  AlgorithmSpec ref;
  ref.kind = Algorithm::ExactBayes;
  ref.param = p_c;
  ref.weight_cutoff = cutoff;
  return ref;
}

}  // namespace

AlgorithmSpec resolve_parameter(AlgorithmSpec spec, const EnvConfig& env, int tune_seeds, int threads) {
  switch (spec.kind) {
    case Algorithm::ExactBayes:
    case Algorithm::MPN:
    case Algorithm::PF:
      spec.param = env.p_c;
      return spec;
    default: break;
  }
  EnvConfig tune_env = env;
  tune_env.seed = env.seed + kTuningSeedOffset;
  spec.param = grid_search(spec, tune_env, default_grid(spec.kind), tune_seeds, threads).best;
  return spec;
}

SampleSummary summarize_sample(const Eigen::Ref<const Eigen::ArrayXd>& values) {
  require(values.size() > 0, "summarize_sample: empty sample");
  const double mean = values.mean();
  if (values.size() < 2) return {mean, std::numeric_limits<double>::quiet_NaN()};
  const double var = (values - mean).square().sum() / static_cast<double>(values.size() - 1);
  return {mean, std::sqrt(var / static_cast<double>(values.size()))};
}

CellReport benchmark_cell(const std::vector<AlgorithmSpec>& algorithms, const EnvConfig& env, int n_seeds, int n_max,
                          double reference_cutoff, int threads) {
  require(n_seeds >= 1 && n_max >= 1, "benchmark_cell: need n_seeds >= 1 and n_max >= 1");
  const std::vector<EnvTrace> traces = simulate_seeds(env, n_seeds, threads);
  const auto seeds = static_cast<std::size_t>(n_seeds);
  const std::size_t n_alg = algorithms.size();
  // job = a * seeds + k; the reference occupies a = n_alg
  const AlgorithmSpec reference = exact_reference(env.p_c, reference_cutoff);
  const std::vector<RunStats> stats = parallel_map((n_alg + 1) * seeds, threads, [&](std::size_t job) {
    const std::size_t a = job / seeds;
    const std::size_t k = job % seeds;
    return run_stats(a < n_alg ? algorithms[a] : reference, env, traces[k], env.seed + k, n_max);
  });

  CellReport out;
  out.algorithms = algorithms;
  out.mse.resize(static_cast<Eigen::Index>(n_alg), n_seeds);
  out.exact_mse.resize(n_seeds);
  for (std::size_t k = 0; k < seeds; ++k) out.exact_mse(static_cast<Eigen::Index>(k)) = stats[n_alg * seeds + k].mse;
  for (std::size_t a = 0; a < n_alg; ++a)
    for (std::size_t k = 0; k < seeds; ++k)
      out.mse(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(k)) = stats[a * seeds + k].mse;
  out.delta_mse = out.mse.rowwise() - out.exact_mse.transpose();
  for (std::size_t a = 0; a < n_alg; ++a) out.transient.push_back(pool(stats, a * seeds, seeds, n_max));
  out.exact_transient = pool(stats, n_alg * seeds, seeds, n_max);
  return out;
}

RegretCurve regret_curve(const AlgorithmSpec& algorithm, const EnvConfig& env, const std::vector<double>& p_true,
                         int n_seeds, double reference_cutoff, int threads) {
  require(n_seeds >= 1 && !p_true.empty(), "regret_curve: need seeds and a p_c grid");
  const auto seeds = static_cast<std::size_t>(n_seeds);
  const std::size_t n_p = p_true.size();
  const std::vector<double> regrets = parallel_map(n_p * seeds, threads, [&](std::size_t job) {
    EnvConfig cfg = env;
    cfg.p_c = p_true[job / seeds];
    cfg.seed = env.seed + job % seeds;
    const EnvTrace trace = simulate(cfg);
    const RunOptions lean{false, false};
    const RunResult alg = run(algorithm, cfg.model, trace, cfg.seed, lean);
    const RunResult ref = run(exact_reference(cfg.p_c, reference_cutoff), cfg.model, trace, cfg.seed, lean);
    return mean_regret(alg, ref);
  });
  RegretCurve out{p_true, Eigen::MatrixXd(static_cast<Eigen::Index>(n_p), n_seeds)};
  for (std::size_t j = 0; j < regrets.size(); ++j)
    out.regret(static_cast<Eigen::Index>(j / seeds), static_cast<Eigen::Index>(j % seeds)) = regrets[j];
  return out;
}

}  // namespace smile
