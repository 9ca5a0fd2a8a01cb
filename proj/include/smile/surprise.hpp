#pragma once

#include <cmath>
#include <limits>
#include <optional>

#include "smile/errors.hpp"
#include "smile/expfam.hpp"
#include "smile/special.hpp"

namespace smile {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Per-step surprise trace.  Every estimator fills all fields except s_cc,
/// which only the SMiLe rule produces.
struct SurpriseRecord {
  double s_bf = 1.0;          ///< Bayes Factor Surprise, P(y; prior) / P(y; belief)
  double s_sh_current = 0.0;  ///< Shannon surprise under the change-aware predictive (nats)
  double s_sh_prior = 0.0;    ///< Shannon surprise under the prior alone, -log P(y; prior)
  double gamma = 0.0;         ///< m s_bf / (1 + m s_bf)
  std::optional<double> s_cc;
};

/// gamma(S, m) = m S / (1 + m S).  An infinite S saturates to 1 when m > 0.
inline double adaptation_rate(double s, double m) {
  require(s >= 0.0 && m >= 0.0, "adaptation_rate: surprise and m must be >= 0");
  if (m == 0.0 || s == 0.0) return 0.0;
  if (std::isinf(s) || std::isinf(m)) return 1.0;
  const double ms = m * s;
  return ms / (1.0 + ms);
}

/// (log gamma, log(1 - gamma)) for gamma(exp(log_s), m), stable at both ends.
struct LogRates {
  double log_gamma;
  double log_one_minus_gamma;
};

inline LogRates log_adaptation_rate(double log_s, double m) {
  require(m >= 0.0, "log_adaptation_rate: m must be >= 0");
  if (m == 0.0 || log_s == -kInfinity) return {-kInfinity, 0.0};
  if (log_s == kInfinity) return {0.0, -kInfinity};
  const double x = std::log(m) + log_s;
  return {-softplus(-x), -softplus(x)};
}

/// -log((1 - p_c) p_current + p_c p_prior); +inf when both probabilities vanish.
inline double shannon_surprise(double p_current, double p_prior, double p_c) {
  require(p_current >= 0.0 && p_prior >= 0.0, "shannon_surprise: probabilities must be >= 0");
  require(p_c > 0.0 && p_c < 1.0, "shannon_surprise: p_c must lie in (0, 1)");
  const double mixed = (1.0 - p_c) * p_current + p_c * p_prior;
  if (mixed == 0.0) return kInfinity;
  return -std::log(mixed);
}

/// gamma = p_c exp(S_Sh(current) - S_Sh(prior)).
inline double gamma_from_shannon(double s_sh_current, double s_sh_prior, double p_c) {
  if (std::isinf(s_sh_current) && std::isinf(s_sh_prior)) return p_c;
  return p_c * std::exp(s_sh_current - s_sh_prior);
}

/// Builds the full record from the two log predictives.  The Shannon terms
/// use p_c = m / (1 + m), the change probability that m encodes, so that
/// gamma_from_shannon reproduces adaptation_rate(s_bf, m).
inline SurpriseRecord make_surprise_record(double log_p_current, double log_p_prior, double m) {
  require(m >= 0.0, "make_surprise_record: m must be >= 0");
  if (log_p_prior == -kInfinity && log_p_current == -kInfinity)
    throw DomainError("observation impossible under both the belief and the prior");
  SurpriseRecord r;
  const double log_s = log_p_prior - log_p_current;
  r.s_bf = std::exp(log_s);
  r.gamma = adaptation_rate(r.s_bf, m);
  r.s_sh_prior = -log_p_prior;
  if (m == 0.0) {
    r.s_sh_current = -log_p_current;
  } else {
    const double p_c = std::isinf(m) ? 1.0 : m / (1.0 + m);
    // (1 - p_c) P_t + p_c P_0 = P_0 (p_c + (1 - p_c) / S_BF)
    const double inv_s = std::exp(-log_s);
    r.s_sh_current = r.s_sh_prior - std::log(p_c + (1.0 - p_c) * inv_s);
  }
  return r;
}

/// S_BF assembled from four log-normalizer evaluations.
template <class Family>
double log_surprise_bf_by_norm(const Family& family, const typename Family::BeliefType& belief,
                               const typename Family::Obs& y) {
  const auto prior = family.prior();
  return family.log_norm(family.bayes_update(belief, y)) - family.log_norm(family.bayes_update(prior, y)) +
         family.log_norm(prior) - family.log_norm(belief);
}

/// Bayes Factor Surprise of y under `belief`, relative to the model's prior.
/// Returns +inf when y is impossible under the belief.
inline double surprise_bf(const ConjugateModel& model, const Beliefd& belief, const Observation& y) {
  return std::visit(
      [&](const auto& f) {
        using F = std::decay_t<decltype(f)>;
        const auto obs = detail::observation_as<F>(y);
        f.check(belief);
        if (f.log_predictive(belief, obs) == -kInfinity) return kInfinity;
        return std::exp(log_surprise_bf_by_norm(f, belief, obs));
      },
      model);
}

/// Confidence Corrected Surprise: KL[belief || scaled likelihood of y].
inline double confidence_corrected(const ConjugateModel& model, const Beliefd& belief, const Observation& y) {
  return kl(model, belief, scaled_likelihood(model, y));
}

}  // namespace smile
