#include "smile/environment.hpp"

#include <ostream>

#include "smile/errors.hpp"
#include "smile/io.hpp"
#include "smile/random.hpp"

namespace smile {

std::vector<int> run_lengths_from_changes(const std::vector<std::uint8_t>& changes) {
  std::vector<int> r(changes.size());
  int current = 0;
  for (std::size_t t = 0; t < changes.size(); ++t) {
    current = (t == 0 || changes[t]) ? 1 : current + 1;
    r[t] = current;
  }
  return r;
}

namespace {

EnvTrace sample_trace(const ConjugateModel& model, std::vector<std::uint8_t> changes, Rng& rng) {
  const auto horizon = static_cast<Eigen::Index>(changes.size());
  EnvTrace trace;
  trace.params.resize(parameter_dim(model), horizon);
  trace.observations.reserve(changes.size());
  Vector<double> theta;
  for (Eigen::Index t = 0; t < horizon; ++t) {
    if (t == 0 || changes[static_cast<std::size_t>(t)]) theta = sample_param(model, rng);
    trace.params.col(t) = theta;
    trace.observations.push_back(sample_obs(model, theta, rng));
  }
  if (!changes.empty()) changes[0] = 1;
  trace.run_lengths = run_lengths_from_changes(changes);
  trace.changes = std::move(changes);
  return trace;
}

}  // namespace

EnvTrace simulate(const EnvConfig& config) {
  require(config.p_c > 0.0 && config.p_c < 1.0, "simulate: p_c must lie in (0, 1)");
  require(config.horizon >= 1, "simulate: horizon must be >= 1");
  Rng change_rng(config.seed, 0);
  std::vector<std::uint8_t> changes(static_cast<std::size_t>(config.horizon), 0);
  changes[0] = 1;
  for (std::size_t t = 1; t < changes.size(); ++t) changes[t] = change_rng.bernoulli(config.p_c) ? 1 : 0;
  Rng draw_rng(config.seed, 1);
  return sample_trace(config.model, std::move(changes), draw_rng);
}

EnvTrace simulate_with_changes(const ConjugateModel& model, std::vector<std::uint8_t> changes, std::uint64_t seed) {
  require(!changes.empty(), "simulate_with_changes: empty change sequence");
  changes[0] = 1;
  Rng draw_rng(seed, 1);
  return sample_trace(model, std::move(changes), draw_rng);
}

EnvConfig gaussian_task(double sigma, double p_c, int horizon, std::uint64_t seed) {
  require(sigma > 0.0, "gaussian_task: sigma must be > 0");
  return EnvConfig{GaussianModel(sigma, 0.0, 1.0), p_c, horizon, seed};
}

EnvConfig categorical_task(double s, double p_c, int horizon, std::uint64_t seed) {
  require(s > 0.0, "categorical_task: s must be > 0");
  return EnvConfig{CategoricalModel::symmetric(kTaskCategories, s), p_c, horizon, seed};
}

void write_trace_csv(std::ostream& out, const EnvTrace& trace) {
  const Eigen::Index dim = trace.params.rows();
  out << "t,c,y";
  if (dim == 1) {
    out << ",theta";
  } else {
    for (Eigen::Index k = 1; k <= dim; ++k) out << ",theta" << k;
  }
  out << '\n';
  for (int t = 0; t < trace.horizon(); ++t) {
    out << (t + 1) << ',' << int(trace.changes[static_cast<std::size_t>(t)]) << ',';
    const Observation& y = trace.observations[static_cast<std::size_t>(t)];
    if (const auto* v = std::get_if<double>(&y))
      out << format_number(*v);
    else
      out << std::get<Category>(y).index;
    for (Eigen::Index k = 0; k < dim; ++k) out << ',' << format_number(trace.params(k, t));
    out << '\n';
  }
}

}  // namespace smile
