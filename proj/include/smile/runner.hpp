#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "smile/environment.hpp"
#include "smile/estimators.hpp"
#include "smile/expfam.hpp"
#include "smile/random.hpp"
#include "smile/surprise.hpp"

namespace smile {

enum class Algorithm { ExactBayes, MPN, PF, VarSmile, Smile, Nas10, Nas12, Leaky };

/// Runtime description of one learner.  `param` is the algorithm's single
/// free parameter: the assumed change probability for the exact, message
/// passing, particle filter and Nas rules; m for the two SMiLe rules; the
/// leak omega for the leaky integrator.
struct AlgorithmSpec {
  Algorithm kind = Algorithm::ExactBayes;
  double param = 0.1;
  int particles = 20;
  double resample_fraction = 0.5;
  double weight_cutoff = 1e-300;
  /// m used only for the leaky integrator's logged gamma.
  double record_m = 0.0;
};

/// Parses exact, mpN, pfN, varsmile, smile, nas10, nas12, leaky (case-insensitive).
AlgorithmSpec parse_algorithm(const std::string& token);

/// Short label: exact, mp20, pf20, varsmile, ...
std::string algorithm_label(const AlgorithmSpec& spec);

/// True when `param` is a change probability rather than m or omega.
bool uses_change_probability(Algorithm kind);

struct RunResult {
  Eigen::MatrixXd estimates;  // dim x T, estimate after observing y_t
  Eigen::MatrixXd truths;     // dim x T
  Eigen::VectorXd initial_estimate;
  std::vector<int> run_lengths;
  std::vector<SurpriseRecord> surprises;
  Eigen::ArrayXd spreads;  // belief std after observing y_t (NaN for categorical)

  int horizon() const { return static_cast<int>(estimates.cols()); }
};

struct RunOptions {
  bool keep_surprises = true;
  bool keep_spreads = true;
};

/// Feeds a trace through an already constructed estimator.
template <class Estimator>
RunResult run_estimator(Estimator& est, const EnvTrace& trace, Rng& rng, const RunOptions& options = {}) {
  using Obs = typename Estimator::Obs;
  const int horizon = trace.horizon();
  RunResult out;
  out.initial_estimate = est.estimate();
  out.estimates.resize(out.initial_estimate.size(), horizon);
  out.truths = trace.params;
  out.run_lengths = trace.run_lengths;
  if (options.keep_surprises) out.surprises.reserve(static_cast<std::size_t>(horizon));
  if (options.keep_spreads) out.spreads.resize(horizon);
  for (int t = 0; t < horizon; ++t) {
    const Obs* y = std::get_if<Obs>(&trace.observations[static_cast<std::size_t>(t)]);
    if (y == nullptr) throw ContractViolation("trace observations do not match the estimator's model");
    const SurpriseRecord rec = est.step(*y, rng);
    if (options.keep_surprises) out.surprises.push_back(rec);
    out.estimates.col(t) = est.estimate();
    if (options.keep_spreads) out.spreads(t) = est.spread();
  }
  return out;
}

/// Runs `spec` on `trace`; stochastic learners draw from stream 2 of `seed`.
RunResult run(const AlgorithmSpec& spec, const ConjugateModel& model, const EnvTrace& trace, std::uint64_t seed,
              const RunOptions& options = {});

/// Per-step table `t,y,estimate...,s_bf,s_sh,gamma`; s_sh is the change-aware
/// Shannon surprise and categorical y is the 1-based label.  Needs a result
/// run with keep_surprises.
void write_step_csv(std::ostream& out, const EnvTrace& trace, const RunResult& result);

}  // namespace smile
