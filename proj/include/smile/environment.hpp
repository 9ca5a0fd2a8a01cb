#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include <Eigen/Core>

#include "smile/expfam.hpp"

namespace smile {

struct EnvConfig {
  ConjugateModel model;
  double p_c = 0.1;
  int horizon = 1000;
  std::uint64_t seed = 0;
};

/// Aligned sequences (y_t, theta_t, c_t, r_t) for t = 1..T.
struct EnvTrace {
  std::vector<Observation> observations;
  Eigen::MatrixXd params;  // dim x T
  std::vector<std::uint8_t> changes;
  std::vector<int> run_lengths;

  int horizon() const { return static_cast<int>(observations.size()); }
};

/// r_t = 1 at a change, r_{t-1} + 1 otherwise.
std::vector<int> run_lengths_from_changes(const std::vector<std::uint8_t>& changes);

/// Samples the generative model: c_1 = 1, c_t ~ Bernoulli(p_c), theta redrawn on change.
EnvTrace simulate(const EnvConfig& config);

/// Same sampler with a prescribed change sequence (c_1 is forced to 1).
EnvTrace simulate_with_changes(const ConjugateModel& model, std::vector<std::uint8_t> changes, std::uint64_t seed);

/// Gaussian task: theta ~ N(0, 1), y ~ N(theta, sigma^2).
EnvConfig gaussian_task(double sigma, double p_c, int horizon, std::uint64_t seed);

/// Categorical task: p ~ Dir(s 1) over five categories, y ~ Categorical(p).
EnvConfig categorical_task(double s, double p_c, int horizon, std::uint64_t seed);

inline constexpr int kTaskCategories = 5;

/// CSV dump with header t,c,y,theta (or theta1..thetaK).
void write_trace_csv(std::ostream& out, const EnvTrace& trace);

}  // namespace smile
