#pragma once

// Independent oracles and randomized property suites shared by the unit
// tests and the acceptance binary.  Oracles deliberately avoid the
// library's recursive machinery: they work from closed-form marginal
// likelihoods, direct quadrature, or brute-force enumeration.

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include "smile/environment.hpp"
#include "smile/estimators.hpp"
#include "smile/expfam.hpp"
#include "smile/random.hpp"
#include "smile/surprise.hpp"

namespace smile::testing {

// --- quadrature ------------------------------------------------------------

/// Composite Simpson rule on [a, b] with an even number of panels.
inline double simpson(const std::function<double(double)>& f, double a, double b, int panels = 20000) {
  if (panels % 2) ++panels;
  const double h = (b - a) / panels;
  double acc = f(a) + f(b);
  for (int k = 1; k < panels; ++k) acc += (k % 2 ? 4.0 : 2.0) * f(a + k * h);
  return acc * h / 3.0;
}

/// log of the integral of exp(theta chi / sigma^2 - nu theta^2 / (2 sigma^2)) over the real line.
inline double gaussian_log_partition_by_quadrature(double chi, double nu, double sigma) {
  const double s2 = sigma * sigma;
  const double centre = chi / nu;
  const double sd = sigma / std::sqrt(nu);
  const double peak = centre * chi / s2 - nu * centre * centre / (2.0 * s2);
  const double integral = simpson(
      [&](double t) { return std::exp(t * chi / s2 - nu * t * t / (2.0 * s2) - peak); }, centre - 12.0 * sd,
      centre + 12.0 * sd);
  return peak + std::log(integral);
}

/// E[log p_1] under Dir(alpha): the marginal of p_1 is Beta(alpha_1, sum - alpha_1).
inline double dirichlet_expected_log_first(const Eigen::VectorXd& alpha) {
  const double a = alpha(0);
  const double b = alpha.sum() - a;
  const double log_beta = std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
  // substitute x = u^2 to tame the endpoint behaviour of log x
  return simpson(
      [&](double u) {
        if (u <= 0.0) return 0.0;
        const double x = u * u;
        if (x >= 1.0) return 0.0;
        return std::log(x) * std::exp((a - 1.0) * std::log(x) + (b - 1.0) * std::log1p(-x) - log_beta) * 2.0 * u;
      },
      0.0, 1.0, 200000);
}

// --- brute-force change-point posterior -------------------------------------

/// Log marginal likelihood of one segment under the Gaussian prior, via the
/// multivariate normal with covariance sigma^2 I + sigma0^2 11^T.
inline double gaussian_segment_log_evidence(const GaussianModel& f, const std::vector<double>& ys) {
  const auto n = static_cast<Eigen::Index>(ys.size());
  Eigen::MatrixXd cov = Eigen::MatrixXd::Constant(n, n, f.prior_var());
  cov.diagonal().array() += f.sigma() * f.sigma();
  Eigen::VectorXd d(n);
  for (Eigen::Index i = 0; i < n; ++i) d(i) = ys[static_cast<std::size_t>(i)] - f.prior_mean();
  const Eigen::LLT<Eigen::MatrixXd> llt(cov);
  const Eigen::MatrixXd l = llt.matrixL();
  const double logdet = 2.0 * l.diagonal().array().log().sum();
  const double quad = d.dot(llt.solve(d));
  return -0.5 * (static_cast<double>(n) * std::log(2.0 * std::numbers::pi) + logdet + quad);
}

inline Eigen::VectorXd gaussian_segment_mean(const GaussianModel& f, const std::vector<double>& ys) {
  double sum = 0.0;
  for (double y : ys) sum += y;
  const double prec = 1.0 / f.prior_var() + static_cast<double>(ys.size()) / (f.sigma() * f.sigma());
  return Eigen::VectorXd::Constant(1, (f.prior_mean() / f.prior_var() + sum / (f.sigma() * f.sigma())) / prec);
}

/// Dirichlet-multinomial evidence of an ordered category sequence.
inline double categorical_segment_log_evidence(const CategoricalModel& f, const std::vector<Category>& ys) {
  const Eigen::VectorXd& alpha = f.prior_alpha();
  Eigen::VectorXd counts = Eigen::VectorXd::Zero(alpha.size());
  for (const Category& c : ys) counts(c.index - 1) += 1.0;
  double acc = std::lgamma(alpha.sum()) - std::lgamma(alpha.sum() + static_cast<double>(ys.size()));
  for (Eigen::Index k = 0; k < alpha.size(); ++k) acc += std::lgamma(alpha(k) + counts(k)) - std::lgamma(alpha(k));
  return acc;
}

inline Eigen::VectorXd categorical_segment_mean(const CategoricalModel& f, const std::vector<Category>& ys) {
  Eigen::VectorXd a = f.prior_alpha();
  for (const Category& c : ys) a(c.index - 1) += 1.0;
  return a / a.sum();
}

/// Posterior mean of theta_T given y_1..y_T by summing over all 2^(T-1)
/// change configurations with c_1 = 1.
template <class Family, class Obs>
Eigen::VectorXd brute_force_posterior_mean(const Family& f, const std::vector<Obs>& ys, double p_c) {
  const int T = static_cast<int>(ys.size());
  const unsigned long configs = 1ul << (T - 1);
  std::vector<double> log_w(configs);
  std::vector<Eigen::VectorXd> means(configs);
  for (unsigned long mask = 0; mask < configs; ++mask) {
    // bit (t - 1) set <=> change at step t + 1 (0-based t >= 1)
    double lw = 0.0;
    std::vector<Obs> segment{ys[0]};
    for (int t = 1; t < T; ++t) {
      const bool change = (mask >> (t - 1)) & 1ul;
      lw += std::log(change ? p_c : 1.0 - p_c);
      if (change) {
        if constexpr (std::is_same_v<Obs, double>)
          lw += gaussian_segment_log_evidence(f, segment);
        else
          lw += categorical_segment_log_evidence(f, segment);
        segment.clear();
      }
      segment.push_back(ys[static_cast<std::size_t>(t)]);
    }
    if constexpr (std::is_same_v<Obs, double>) {
      lw += gaussian_segment_log_evidence(f, segment);
      means[mask] = gaussian_segment_mean(f, segment);
    } else {
      lw += categorical_segment_log_evidence(f, segment);
      means[mask] = categorical_segment_mean(f, segment);
    }
    log_w[mask] = lw;
  }
  const double hi = *std::max_element(log_w.begin(), log_w.end());
  double z = 0.0;
  Eigen::VectorXd acc = Eigen::VectorXd::Zero(means[0].size());
  for (unsigned long mask = 0; mask < configs; ++mask) {
    const double w = std::exp(log_w[mask] - hi);
    z += w;
    acc += w * means[mask];
  }
  return acc / z;
}

// --- random draws ----------------------------------------------------------

inline Beliefd random_gaussian_belief(const GaussianModel& f, Rng& rng) {
  return f.from_moments(rng.normal(0.0, 2.0), std::exp(rng.normal(-1.0, 1.0)));
}

inline Beliefd random_dirichlet_belief(const CategoricalModel& f, Rng& rng) {
  Eigen::VectorXd a(f.dim());
  for (Eigen::Index k = 0; k < a.size(); ++k) a(k) = std::exp(rng.normal(0.0, 1.2));
  return {a, rng.uniform() * 10.0};
}

inline Category random_category(const CategoricalModel& f, Rng& rng) {
  return Category{1 + static_cast<int>(rng.uniform() * f.num_categories()) % f.num_categories()};
}

inline GaussianModel random_gaussian_model(Rng& rng) {
  return GaussianModel(std::exp(rng.normal(0.0, 0.8)), rng.normal(0.0, 0.5), std::exp(rng.normal(0.0, 0.5)));
}

inline CategoricalModel random_categorical_model(Rng& rng, int k = 5) {
  Eigen::VectorXd a(k);
  for (int i = 0; i < k; ++i) a(i) = std::exp(rng.normal(-0.5, 1.0));
  return CategoricalModel(a);
}

// --- property suites -------------------------------------------------------

struct PropertyOutcome {
  std::string name;
  int cases = 0;
  int failures = 0;
  std::string first_failure;

  bool ok() const { return failures == 0 && cases >= 1000; }

  void record(bool pass, const std::string& what) {
    ++cases;
    if (pass) return;
    if (failures++ == 0) first_failure = what;
  }
};

/// Every mixture learner keeps weights >= 0 summing to one after each step.
inline PropertyOutcome weight_normalization_property(int cases = 1000, std::uint64_t seed = 11) {
  PropertyOutcome out{"weight normalization", 0, 0, {}};
  Rng rng(seed, 7);
  for (int c = 0; c < cases; ++c) {
    const double p_c = std::exp(rng.normal(-3.0, 1.5));
    const double m = p_c < 1.0 ? p_c / (1.0 - p_c) : 1.0;
    const int kind = c % 3;
    auto check = [&](const auto& set, int step) {
      const double sum = set.weights().sum();
      const bool pos = (set.weights() >= 0.0).all();
      const double log_sum = log_sum_exp(set.log_weights().eval());
      std::ostringstream msg;
      msg << "case " << c << " kind " << kind << " step " << step << " sum " << sum;
      out.record(pos && std::abs(sum - 1.0) <= 1e-12 && std::abs(log_sum) <= 1e-12, msg.str());
    };
    const int steps = 5 + static_cast<int>(rng.uniform() * 40);
    if (c % 2 == 0) {
      const GaussianModel f = random_gaussian_model(rng);
      MessagePassing<GaussianModel> mp(f, m, kind == 0 ? 0 : 1 + static_cast<int>(rng.uniform() * 8));
      ParticleFilter<GaussianModel> pf(f, m, 1 + static_cast<int>(rng.uniform() * 20));
      for (int t = 0; t < steps; ++t) {
        const double y = rng.normal(0.0, 3.0);
        mp.step(y);
        pf.step(y, rng);
      }
      check(mp.particles(), steps);
      check(pf.particles(), steps);
    } else {
      const CategoricalModel f = random_categorical_model(rng);
      MessagePassing<CategoricalModel> mp(f, m, kind == 0 ? 0 : 1 + static_cast<int>(rng.uniform() * 8));
      ParticleFilter<CategoricalModel> pf(f, m, 1 + static_cast<int>(rng.uniform() * 20));
      for (int t = 0; t < steps; ++t) {
        const Category y = random_category(f, rng);
        mp.step(y);
        pf.step(y, rng);
      }
      check(mp.particles(), steps);
      check(pf.particles(), steps);
    }
  }
  return out;
}

/// KL >= 0, and KL = 0 exactly when both arguments coincide.
inline PropertyOutcome kl_nonnegativity_property(int cases = 1000, std::uint64_t seed = 12) {
  PropertyOutcome out{"KL non-negativity", 0, 0, {}};
  Rng rng(seed, 7);
  for (int c = 0; c < cases; ++c) {
    std::ostringstream msg;
    if (c % 2 == 0) {
      const GaussianModel f = random_gaussian_model(rng);
      const Beliefd a = random_gaussian_belief(f, rng);
      const Beliefd b = random_gaussian_belief(f, rng);
      const double ab = f.kl(a, b);
      const double aa = f.kl(a, a);
      msg << "gaussian case " << c << " kl " << ab << " self " << aa;
      out.record(ab > 0.0 && aa == 0.0, msg.str());
    } else {
      const CategoricalModel f = random_categorical_model(rng);
      const Beliefd a = random_dirichlet_belief(f, rng);
      const Beliefd b = random_dirichlet_belief(f, rng);
      const double ab = f.kl(a, b);
      const double aa = f.kl(a, a);
      msg << "dirichlet case " << c << " kl " << ab << " self " << aa;
      out.record(ab > 0.0 && aa == 0.0, msg.str());
    }
  }
  return out;
}

/// S_BF = 1 for any observation when the belief is the prior.
inline PropertyOutcome surprise_at_prior_property(int cases = 1000, std::uint64_t seed = 13) {
  PropertyOutcome out{"S_BF = 1 at belief = prior", 0, 0, {}};
  Rng rng(seed, 7);
  for (int c = 0; c < cases; ++c) {
    std::ostringstream msg;
    if (c % 2 == 0) {
      const ConjugateModel model = random_gaussian_model(rng);
      const Observation y = rng.normal(0.0, 5.0);
      const double s = surprise_bf(model, prior_belief(model), y);
      msg << "gaussian case " << c << " S_BF " << s;
      out.record(std::abs(s - 1.0) <= 1e-12, msg.str());
    } else {
      const CategoricalModel f = random_categorical_model(rng);
      const Observation y = random_category(f, rng);
      const double s = surprise_bf(ConjugateModel{f}, f.prior(), y);
      msg << "categorical case " << c << " S_BF " << s;
      out.record(std::abs(s - 1.0) <= 1e-12, msg.str());
    }
  }
  return out;
}

/// gamma(S, m) in [0, 1], zero iff S = 0, strictly increasing in S (m > 0)
/// and non-decreasing in m.
inline PropertyOutcome adaptation_monotonicity_property(int cases = 1000, std::uint64_t seed = 14) {
  PropertyOutcome out{"adaptation-rate monotonicity", 0, 0, {}};
  Rng rng(seed, 7);
  for (int c = 0; c < cases; ++c) {
    const double m = std::exp(rng.normal(0.0, 3.0));
    const double s1 = std::exp(rng.normal(0.0, 3.0));
    const double s2 = s1 * (1.0 + std::exp(rng.normal(-2.0, 1.0)));
    const double m2 = m * (1.0 + rng.uniform());
    const double g1 = adaptation_rate(s1, m);
    const double g2 = adaptation_rate(s2, m);
    const double g3 = adaptation_rate(s1, m2);
    const double g0 = adaptation_rate(0.0, m);
    const double ginf = adaptation_rate(kInfinity, m);
    std::ostringstream msg;
    msg << "case " << c << " m " << m << " s " << s1 << "->" << s2 << " g " << g1 << "->" << g2;
    const bool bounded = g1 >= 0.0 && g1 <= 1.0 && g2 <= 1.0;
    const bool strict = g2 > g1 || (g1 == 1.0 && g2 == 1.0);
    out.record(bounded && strict && g3 >= g1 && g0 == 0.0 && g1 > 0.0 && ginf == 1.0, msg.str());
  }
  return out;
}

/// Identical (config, seed) gives bit-identical traces; the run-length and
/// copy-on-no-change invariants hold.
inline PropertyOutcome trace_reproducibility_property(int cases = 1000, std::uint64_t seed = 15) {
  PropertyOutcome out{"trace reproducibility", 0, 0, {}};
  Rng rng(seed, 7);
  for (int c = 0; c < cases; ++c) {
    const double p_c = 0.01 + 0.5 * rng.uniform();
    const int T = 1 + static_cast<int>(rng.uniform() * 60);
    const std::uint64_t s = static_cast<std::uint64_t>(rng.uniform() * 1e12);
    const EnvConfig cfg = c % 2 == 0 ? gaussian_task(0.1 + rng.uniform(), p_c, T, s)
                                     : categorical_task(0.1 + rng.uniform(), p_c, T, s);
    const EnvTrace a = simulate(cfg);
    const EnvTrace b = simulate(cfg);
    bool same = a.observations == b.observations && a.params == b.params && a.changes == b.changes &&
                a.run_lengths == b.run_lengths;
    bool invariants = a.changes.at(0) == 1 && a.run_lengths == run_lengths_from_changes(a.changes);
    for (int t = 1; t < T; ++t)
      if (!a.changes[static_cast<std::size_t>(t)] && a.params.col(t) != a.params.col(t - 1)) invariants = false;
    std::ostringstream msg;
    msg << "case " << c << " seed " << s << " T " << T;
    out.record(same && invariants, msg.str());
  }
  return out;
}

inline std::vector<PropertyOutcome> all_properties() {
  return {weight_normalization_property(), kl_nonnegativity_property(), surprise_at_prior_property(),
          adaptation_monotonicity_property(), trace_reproducibility_property()};
}

}  // namespace smile::testing
