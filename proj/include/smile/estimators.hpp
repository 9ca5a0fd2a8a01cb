#pragma once

// Online learners for the change-point generative model.  Every estimator
// exposes the same contract:
//
//   SurpriseRecord step(const Obs& y, Rng& rng);   // consumes one observation
//   Vector<Scalar> estimate() const;               // posterior-mean readout
//   Scalar spread() const;                         // belief std (Gaussian), NaN otherwise
//
// Deterministic estimators also accept step(y) and ignore the random source.

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <type_traits>
#include <vector>

#include <Eigen/Core>

#include "smile/errors.hpp"
#include "smile/expfam.hpp"
#include "smile/particles.hpp"
#include "smile/random.hpp"
#include "smile/special.hpp"
#include "smile/surprise.hpp"

namespace smile {

/// m = p_c / (1 - p_c), the prior odds of a change.
inline double change_odds(double p_c) {
  require(p_c > 0.0 && p_c < 1.0, "change probability must lie in (0, 1)");
  return p_c / (1.0 - p_c);
}

template <class Family>
inline constexpr bool is_gaussian_v =
    std::is_same_v<Family, GaussianKnownVariance<typename Family::ScalarType>>;

namespace detail {

template <class Family>
typename Family::ScalarType belief_spread(const Family& family, const typename Family::BeliefType& b) {
  if constexpr (is_gaussian_v<Family>) {
    return std::sqrt(family.variance(b));
  } else {
    return std::numeric_limits<typename Family::ScalarType>::quiet_NaN();
  }
}

template <class Family>
Vector<typename Family::ScalarType> mixture_mean(const Family& family,
                                                 const ParticleSet<typename Family::ScalarType>& set) {
  if (set.empty()) return family.point_estimate(family.prior());
  return family.point_estimates(set.chi(), set.nu()) * set.weights().matrix();
}

template <class Family>
typename Family::ScalarType mixture_spread(const Family& family,
                                           const ParticleSet<typename Family::ScalarType>& set) {
  using Scalar = typename Family::ScalarType;
  if constexpr (is_gaussian_v<Family>) {
    if (set.empty()) return std::sqrt(family.prior_var());
    const Array<Scalar> w = set.weights();
    const Array<Scalar> mu = set.chi().row(0).transpose().array() / set.nu();
    const Array<Scalar> var = family.sigma() * family.sigma() / set.nu();
    const Scalar mean = (w * mu).sum();
    const Scalar second = (w * (var + mu.square())).sum();
    return std::sqrt(std::max(second - mean * mean, Scalar(0)));
  } else {
    return std::numeric_limits<Scalar>::quiet_NaN();
  }
}

}  // namespace detail

/// One VarSMiLe update: chi' = (1 - g) chi + g chi0 + phi(y), nu' = (1 - g) nu + g nu0 + 1.
template <class Family>
typename Family::BeliefType var_smile_update(const Family& family, const typename Family::BeliefType& belief,
                                             typename Family::ScalarType gamma, const typename Family::Obs& y) {
  return family.bayes_update(geometric_mix(belief, family.prior(), gamma), y);
}

/// Variational SMiLe: a single conjugate belief pulled toward the prior at
/// the surprise-modulated rate before integrating each observation.
template <class Family>
class VarSmile {
 public:
  using Scalar = typename Family::ScalarType;
  using Obs = typename Family::Obs;
  using BeliefType = typename Family::BeliefType;

  VarSmile(Family family, Scalar m) : family_(std::move(family)), m_(m), belief_(family_.prior()) {
    require(m >= Scalar(0), "VarSmile: m must be >= 0");
  }

  VarSmile(Family family, Scalar m, BeliefType start) : VarSmile(std::move(family), m) {
    family_.check(start);
    belief_ = std::move(start);
  }

  SurpriseRecord step(const Obs& y) {
    const Scalar lp = family_.log_predictive(belief_, y);
    const Scalar lp0 = family_.log_predictive(family_.prior(), y);
    SurpriseRecord rec = make_surprise_record(lp, lp0, m_);
    belief_ = var_smile_update(family_, belief_, static_cast<Scalar>(rec.gamma), y);
    return rec;
  }
  SurpriseRecord step(const Obs& y, Rng&) { return step(y); }

  Vector<Scalar> estimate() const { return family_.point_estimate(belief_); }
  Scalar spread() const { return detail::belief_spread(family_, belief_); }
  const BeliefType& belief() const { return belief_; }
  const Family& family() const { return family_; }
  Scalar m() const { return m_; }

 private:
  Family family_;
  Scalar m_;
  BeliefType belief_;
};

/// Bounded message passing over change histories.  With cap == 0 no particle
/// is ever dropped for capacity and the rule is exact Bayesian inference
/// (up to the negligible-weight cut-off).
template <class Family>
class MessagePassing {
 public:
  using Scalar = typename Family::ScalarType;
  using Obs = typename Family::Obs;
  using BeliefType = typename Family::BeliefType;

  static constexpr double kDefaultCutoff = 1e-300;

  MessagePassing(Family family, Scalar m, Eigen::Index cap = 0, Scalar weight_cutoff = Scalar(kDefaultCutoff))
      : family_(std::move(family)),
        m_(m),
        cap_(cap),
        log_cutoff_(weight_cutoff > Scalar(0) ? std::log(weight_cutoff) : -std::numeric_limits<Scalar>::infinity()),
        particles_(family_.dim(), cap > 0 ? cap + 1 : 64) {
    require(m >= Scalar(0), "MessagePassing: m must be >= 0");
    require(cap >= 0, "MessagePassing: particle cap must be >= 0");
  }

  SurpriseRecord step(const Obs& y) {
    const BeliefType prior = family_.prior();
    const Scalar lp0 = family_.log_predictive(prior, y);

    if (particles_.empty()) {
      // c_1 = 1: the first observation always starts a fresh segment.
      particles_.push_back(family_.bayes_update(prior, y), Scalar(0), 1);
      return make_surprise_record(lp0, lp0, m_);
    }

    // One exponential per particle: the shifted joint terms give both the
    // mixture predictive and the new linear weights.
    auto lw = particles_.log_weights();
    joint_ = lw + family_.log_predictive(particles_.chi(), particles_.nu(), y);
    const Scalar hi = joint_.maxCoeff();
    Scalar lmix = hi;
    if (std::isfinite(hi)) {
      scratch_ = (joint_ - hi).exp();
      lmix = hi + std::log(scratch_.sum());
    }
    SurpriseRecord rec = make_surprise_record(lmix, lp0, m_);
    const LogRates rates = log_adaptation_rate(lp0 - lmix, m_);

    if (std::isfinite(lmix)) {
      lw = joint_ - (lmix - rates.log_one_minus_gamma);
      particles_.weights() = scratch_ * std::exp(hi - lmix + rates.log_one_minus_gamma);
    } else {
      lw.setConstant(-std::numeric_limits<Scalar>::infinity());
      particles_.weights().setZero();
    }

    particles_.add_to_all(family_.sufficient(y));
    particles_.nu() += Scalar(1);
    particles_.run_lengths() += 1;
    particles_.push_back(family_.bayes_update(prior, y), rates.log_gamma, 1);

    particles_.prune_below(log_cutoff_);
    particles_.rescale();
    if (cap_ > 0 && particles_.size() > cap_) {
      particles_.erase(particles_.argmin_weight());
      particles_.rescale();
    }
    return rec;
  }
  SurpriseRecord step(const Obs& y, Rng&) { return step(y); }

  Vector<Scalar> estimate() const { return detail::mixture_mean(family_, particles_); }
  Scalar spread() const { return detail::mixture_spread(family_, particles_); }
  const ParticleSet<Scalar>& particles() const { return particles_; }
  const Family& family() const { return family_; }
  Scalar m() const { return m_; }
  Eigen::Index cap() const { return cap_; }

 private:
  Family family_;
  Scalar m_;
  Eigen::Index cap_;
  Scalar log_cutoff_;
  ParticleSet<Scalar> particles_;
  Array<Scalar> joint_;
  Array<Scalar> scratch_;
};

/// Sequential Monte Carlo over change histories with the optimal proposal.
template <class Family>
class ParticleFilter {
 public:
  using Scalar = typename Family::ScalarType;
  using Obs = typename Family::Obs;
  using BeliefType = typename Family::BeliefType;

  ParticleFilter(Family family, Scalar m, Eigen::Index n, Scalar resample_fraction = Scalar(0.5))
      : family_(std::move(family)), m_(m), n_(n), threshold_(resample_fraction * Scalar(n)), particles_(family_.dim(), n) {
    require(m >= Scalar(0), "ParticleFilter: m must be >= 0");
    require(n >= 1, "ParticleFilter: need at least one particle");
    require(resample_fraction >= Scalar(0) && resample_fraction <= Scalar(1),
            "ParticleFilter: resampling fraction must lie in [0, 1]");
    const BeliefType prior = family_.prior();
    const Scalar lw = -std::log(Scalar(n));
    for (Eigen::Index i = 0; i < n; ++i) particles_.push_back(prior, lw, 0);
  }

  /// All particles start from `start` with uniform weights.
  ParticleFilter(Family family, Scalar m, Eigen::Index n, Scalar resample_fraction, const BeliefType& start)
      : ParticleFilter(std::move(family), m, n, resample_fraction) {
    family_.check(start);
    for (Eigen::Index i = 0; i < n; ++i) {
      particles_.chi().col(i) = start.chi;
      particles_.nu()(i) = start.nu;
    }
  }

  SurpriseRecord step(const Obs& y, Rng& rng) {
    const BeliefType prior = family_.prior();
    const Scalar lp0 = family_.log_predictive(prior, y);
    const Array<Scalar> lp = family_.log_predictive(particles_.chi(), particles_.nu(), y);
    auto lw = particles_.log_weights();
    const Scalar lmix = log_sum_exp((lw + lp).eval());
    SurpriseRecord rec = make_surprise_record(lmix, lp0, m_);
    const LogRates rates = log_adaptation_rate(lp0 - lmix, m_);

    // w' = (1 - g) w_B + g w
    const Eigen::Index n = particles_.size();
    for (Eigen::Index i = 0; i < n; ++i) {
      const Scalar stay = std::isfinite(lmix) ? rates.log_one_minus_gamma + lw(i) + lp(i) - lmix
                                              : -std::numeric_limits<Scalar>::infinity();
      lw(i) = log_add_exp(stay, rates.log_gamma + lw(i));
    }
    particles_.normalize();

    // Optimal proposal: each particle restarts with its own adaptation rate.
    std::vector<char> reset(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) {
      const Scalar g = std::exp(log_adaptation_rate(lp0 - lp(i), m_).log_gamma);
      reset[static_cast<std::size_t>(i)] = rng.bernoulli(g) ? 1 : 0;
    }

    const Scalar n_eff = Scalar(1) / (Scalar(2) * particles_.log_weights()).exp().sum();
    last_resampled_ = n_eff <= threshold_;
    if (last_resampled_) {
      const std::vector<Eigen::Index> picks = multinomial(rng);
      std::vector<char> carried(picks.size());
      for (std::size_t k = 0; k < picks.size(); ++k) carried[k] = reset[static_cast<std::size_t>(picks[k])];
      particles_.resample(picks);
      reset.swap(carried);
    }

    const Vector<Scalar> phi = family_.sufficient(y);
    for (Eigen::Index i = 0; i < n; ++i) {
      if (reset[static_cast<std::size_t>(i)]) {
        particles_.chi().col(i) = prior.chi + phi;
        particles_.nu()(i) = prior.nu + Scalar(1);
        particles_.run_lengths()(i) = 1;
      } else {
        particles_.chi().col(i) += phi;
        particles_.nu()(i) += Scalar(1);
        particles_.run_lengths()(i) += 1;
      }
    }
    return rec;
  }

  Vector<Scalar> estimate() const { return detail::mixture_mean(family_, particles_); }
  Scalar spread() const { return detail::mixture_spread(family_, particles_); }
  const ParticleSet<Scalar>& particles() const { return particles_; }
  const Family& family() const { return family_; }
  Scalar m() const { return m_; }
  bool last_resampled() const { return last_resampled_; }

 private:
  std::vector<Eigen::Index> multinomial(Rng& rng) const {
    const Array<Scalar> w = particles_.weights();
    std::vector<Scalar> cdf(static_cast<std::size_t>(w.size()));
    Scalar acc(0);
    for (Eigen::Index i = 0; i < w.size(); ++i) cdf[static_cast<std::size_t>(i)] = acc += w(i);
    std::vector<Eigen::Index> picks(static_cast<std::size_t>(n_));
    for (auto& pick : picks) {
      const Scalar u = rng.uniform() * acc;
      const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
      pick = std::min<Eigen::Index>(it - cdf.begin(), w.size() - 1);
    }
    return picks;
  }

  Family family_;
  Scalar m_;
  Eigen::Index n_;
  Scalar threshold_;
  ParticleSet<Scalar> particles_;
  bool last_resampled_ = false;
};

/// Surprise Minimization Learning: trades the current belief against the
/// scaled likelihood under a KL budget set by the Confidence Corrected Surprise.
template <class Family>
class Smile {
 public:
  using Scalar = typename Family::ScalarType;
  using Obs = typename Family::Obs;
  using BeliefType = typename Family::BeliefType;

  static constexpr int kMaxIterations = 100;
  static constexpr double kTolerance = 1e-8;

  Smile(Family family, Scalar m) : family_(std::move(family)), m_(m), belief_(family_.prior()) {
    require(m >= Scalar(0), "Smile: m must be >= 0");
  }

  Smile(Family family, Scalar m, BeliefType start) : Smile(std::move(family), m) {
    family_.check(start);
    belief_ = std::move(start);
  }

  SurpriseRecord step(const Obs& y) {
    const Scalar lp = family_.log_predictive(belief_, y);
    const Scalar lp0 = family_.log_predictive(family_.prior(), y);
    SurpriseRecord rec = make_surprise_record(lp, lp0, m_);

    const BeliefType target = family_.scaled_likelihood(y);
    const Scalar s_cc = family_.kl(belief_, target);
    rec.s_cc = s_cc;
    const Scalar b_max = family_.kl(target, belief_);
    const Scalar budget = b_max * adaptation_rate(s_cc, m_);
    last_gamma_ = solve_mixing(belief_, target, budget, b_max);
    last_budget_ = budget;
    belief_ = geometric_mix(belief_, target, last_gamma_);
    return rec;
  }
  SurpriseRecord step(const Obs& y, Rng&) { return step(y); }

  /// gamma in [0, 1] with KL[mix(belief, target, gamma) || belief] = budget.
  Scalar solve_mixing(const BeliefType& belief, const BeliefType& target, Scalar budget, Scalar b_max) const {
    const Scalar tol = Scalar(kTolerance);
    if (budget <= tol) return Scalar(0);
    if (budget >= b_max - tol) return Scalar(1);
    Scalar lo(0);
    Scalar hi(1);
    for (int it = 0; it < kMaxIterations; ++it) {
      const Scalar mid = Scalar(0.5) * (lo + hi);
      const Scalar gap = family_.kl(geometric_mix(belief, target, mid), belief) - budget;
      if (std::abs(gap) < tol) return mid;
      (gap < Scalar(0) ? lo : hi) = mid;
    }
    throw NumericError("Smile: bisection did not reach the KL budget " + std::to_string(budget) + " (B_max " +
                       std::to_string(b_max) + ", bracket [" + std::to_string(lo) + ", " + std::to_string(hi) +
                       "])");
  }

  Vector<Scalar> estimate() const { return family_.point_estimate(belief_); }
  Scalar spread() const { return detail::belief_spread(family_, belief_); }
  const BeliefType& belief() const { return belief_; }
  const Family& family() const { return family_; }
  Scalar m() const { return m_; }
  Scalar last_gamma() const { return last_gamma_; }
  Scalar last_budget() const { return last_budget_; }

 private:
  Family family_;
  Scalar m_;
  BeliefType belief_;
  Scalar last_gamma_{0};
  Scalar last_budget_{0};
};

enum class NasVariant { Nas10, Nas12 };

/// Gaussian-prior generalizations of the two delta-rule learners with a
/// surprise-modulated learning rate.  The belief is summarized by
/// (mu_hat, sigma_hat^2, r_hat).
template <typename Scalar = double>
class NasStar {
 public:
  using Family = GaussianKnownVariance<Scalar>;
  using Obs = Scalar;

  struct State {
    Scalar mu;
    Scalar var;
    Scalar r;
  };

  NasStar(Family family, Scalar m, NasVariant variant)
      : family_(std::move(family)),
        m_(m),
        variant_(variant),
        state_{family_.prior_mean(), family_.prior_var(), Scalar(0)} {
    require(m >= Scalar(0), "NasStar: m must be >= 0");
  }

  NasStar(Family family, Scalar m, NasVariant variant, State start) : NasStar(std::move(family), m, variant) {
    require(start.var > Scalar(0) && start.r >= Scalar(0), "NasStar: need var > 0 and r >= 0");
    state_ = start;
  }

  /// Mean after integrating y into the current segment.
  Scalar stay_mean(Scalar y) const {
    return state_.mu + (y - state_.mu) / (family_.rho() + state_.r + Scalar(1));
  }
  /// Mean after integrating y into a freshly drawn segment.
  Scalar change_mean(Scalar y) const {
    return family_.prior_mean() + (y - family_.prior_mean()) / (family_.rho() + Scalar(1));
  }

  SurpriseRecord step(Scalar y) {
    const auto belief = family_.from_moments(state_.mu, state_.var);
    const Scalar lp = family_.log_predictive(belief, y);
    const Scalar lp0 = family_.log_predictive(family_.prior(), y);
    SurpriseRecord rec = make_surprise_record(lp, lp0, m_);
    const Scalar g = static_cast<Scalar>(rec.gamma);

    const Scalar rho = family_.rho();
    const Scalar s2 = family_.sigma() * family_.sigma();
    const Scalar mu_b = stay_mean(y);
    const Scalar mu_c = change_mean(y);
    State next{(Scalar(1) - g) * mu_b + g * mu_c, state_.var, state_.r};
    if (variant_ == NasVariant::Nas10) {
      next.r = (Scalar(1) - g) * (state_.r + Scalar(1)) + g;
      next.var = Scalar(1) / (Scalar(1) / family_.prior_var() + next.r / s2);
    } else {
      const Scalar alpha = (rho + g * state_.r + Scalar(1)) / (rho + state_.r + Scalar(1));
      const Scalar gap = mu_b - mu_c;
      next.var = s2 / (rho + Scalar(1)) * alpha + (Scalar(1) - g) * g * gap * gap;
      next.r = std::max(s2 / next.var - rho, Scalar(0));
    }
    state_ = next;
    return rec;
  }
  SurpriseRecord step(Scalar y, Rng&) { return step(y); }

  Vector<Scalar> estimate() const { return Vector<Scalar>::Constant(1, state_.mu); }
  Scalar spread() const { return std::sqrt(state_.var); }
  const State& state() const { return state_; }
  const Family& family() const { return family_; }
  Scalar m() const { return m_; }
  NasVariant variant() const { return variant_; }

 private:
  Family family_;
  Scalar m_;
  NasVariant variant_;
  State state_;
};

/// Exponentially discounted running average of the sufficient statistic.
/// The surprise record is computed against a stand-in belief centred on the
/// leaky estimate with the prior's dispersion.
template <class Family>
class LeakyIntegrator {
 public:
  using Scalar = typename Family::ScalarType;
  using Obs = typename Family::Obs;
  using BeliefType = typename Family::BeliefType;

  /// `m_record` only feeds the logged gamma; it does not affect the estimate.
  LeakyIntegrator(Family family, Scalar omega, Scalar m_record = Scalar(0))
      : family_(std::move(family)), omega_(omega), m_record_(m_record), num_(Vector<Scalar>::Zero(family_.dim())) {
    require(omega > Scalar(0) && omega <= Scalar(1), "LeakyIntegrator: leak must lie in (0, 1]");
    require(m_record >= Scalar(0), "LeakyIntegrator: m must be >= 0");
  }

  SurpriseRecord step(const Obs& y) {
    const Scalar lp = family_.log_predictive(stand_in_belief(), y);
    const Scalar lp0 = family_.log_predictive(family_.prior(), y);
    SurpriseRecord rec = make_surprise_record(lp, lp0, m_record_);
    num_ = omega_ * num_ + family_.sufficient(y);
    den_ = omega_ * den_ + Scalar(1);
    return rec;
  }
  SurpriseRecord step(const Obs& y, Rng&) { return step(y); }

  Vector<Scalar> estimate() const {
    if (den_ == Scalar(0)) return family_.point_estimate(family_.prior());
    return num_ / den_;
  }

  /// Belief used for the surprise bookkeeping.
  BeliefType stand_in_belief() const {
    if (den_ == Scalar(0)) return family_.prior();
    if constexpr (is_gaussian_v<Family>) {
      return family_.from_moments(estimate()(0), family_.prior_var());
    } else {
      const Vector<Scalar>& alpha0 = family_.prior_alpha();
      return BeliefType{(alpha0 + alpha0.sum() * estimate()).eval(), den_};
    }
  }

  Scalar spread() const { return detail::belief_spread(family_, stand_in_belief()); }
  const Family& family() const { return family_; }
  Scalar omega() const { return omega_; }

 private:
  Family family_;
  Scalar omega_;
  Scalar m_record_;
  Vector<Scalar> num_;
  Scalar den_{0};
};

}  // namespace smile
