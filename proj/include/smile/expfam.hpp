#pragma once

// Conjugate exponential-family models.
//
// A belief over the latent parameter is stored in natural coordinates
// (chi, nu) of the conjugate family, i.e. a density proportional to
// exp(theta . chi - nu A(theta)).  Bayesian updating is additive in these
// coordinates and so is the log-linear (geometric) mixing used by the
// variational rules.  Each family folds its base measure h~(theta) into
// its log-normalizer:
//
//   GaussianKnownVariance  theta = mean, chi / nu = posterior mean,
//                          sigma^2 / nu = posterior variance.
//   CategoricalDirichlet   chi = Dirichlet concentrations alpha (the base
//                          measure prod_k p_k^-1 is folded in), nu counts
//                          observations and is otherwise inert.

#include <cmath>
#include <numbers>
#include <string>
#include <variant>

#include <Eigen/Core>

#include "smile/errors.hpp"
#include "smile/random.hpp"
#include "smile/special.hpp"

namespace smile {

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
using Array = Eigen::Array<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar = double>
struct Belief {
  using ScalarType = Scalar;
  Vector<Scalar> chi;
  Scalar nu{0};

  bool operator==(const Belief& other) const { return chi == other.chi && nu == other.nu; }
};

using Beliefd = Belief<double>;

/// Category label, 1-based.
struct Category {
  int index = 1;
  bool operator==(const Category&) const = default;
};

using Observation = std::variant<double, Category>;

/// Componentwise ((1 - gamma) a + gamma b); the natural-parameter form of a
/// renormalized exp((1 - gamma) log a + gamma log b).
template <typename Scalar>
Belief<Scalar> geometric_mix(const Belief<Scalar>& a, const Belief<Scalar>& b, Scalar gamma) {
  require(gamma >= Scalar(0) && gamma <= Scalar(1), "geometric_mix: gamma must lie in [0, 1]");
  if (gamma == Scalar(0)) return a;
  if (gamma == Scalar(1)) return b;
  return {((Scalar(1) - gamma) * a.chi + gamma * b.chi).eval(), (Scalar(1) - gamma) * a.nu + gamma * b.nu};
}

/// Gaussian likelihood N(y; theta, sigma^2) with known sigma and a
/// N(prior_mean, prior_var) conjugate prior on theta.
template <typename Scalar = double>
class GaussianKnownVariance {
 public:
  using ScalarType = Scalar;
  using Obs = Scalar;
  using BeliefType = Belief<Scalar>;

  GaussianKnownVariance(Scalar sigma, Scalar prior_mean = Scalar(0), Scalar prior_var = Scalar(1))
      : sigma_(sigma), prior_mean_(prior_mean), prior_var_(prior_var) {
    require(sigma > Scalar(0) && std::isfinite(sigma), "GaussianKnownVariance: sigma must be > 0");
    require(prior_var > Scalar(0) && std::isfinite(prior_var),
            "GaussianKnownVariance: prior variance must be finite and > 0");
  }

  static constexpr const char* name() { return "gaussian-known-variance"; }
  Eigen::Index dim() const { return 1; }
  Scalar sigma() const { return sigma_; }
  Scalar prior_mean() const { return prior_mean_; }
  Scalar prior_var() const { return prior_var_; }
  /// sigma^2 / sigma_0^2, the prior's weight in units of observations.
  Scalar rho() const { return sigma_ * sigma_ / prior_var_; }

  BeliefType prior() const { return from_moments(prior_mean_, prior_var_); }

  BeliefType from_moments(Scalar mean, Scalar var) const {
    require(var > Scalar(0), "GaussianKnownVariance: belief variance must be > 0");
    const Scalar nu = sigma_ * sigma_ / var;
    BeliefType b{Vector<Scalar>::Constant(1, mean * nu), nu};
    return b;
  }

  Scalar mean(const BeliefType& b) const { return b.chi(0) / b.nu; }
  Scalar variance(const BeliefType& b) const { return sigma_ * sigma_ / b.nu; }

  bool valid(const BeliefType& b) const {
    return b.chi.size() == 1 && std::isfinite(b.chi(0)) && b.nu > Scalar(0) && std::isfinite(b.nu);
  }

  void check(const BeliefType& b) const {
    if (!valid(b)) throw DomainError("gaussian belief must have one finite chi and 0 < nu < inf");
  }

  Vector<Scalar> sufficient(Obs y) const { return Vector<Scalar>::Constant(1, y); }

  /// log f(chi, nu), f the normalization factor of the conjugate density.
  Scalar log_norm(const BeliefType& b) const {
    check(b);
    const Scalar s2 = sigma_ * sigma_;
    const Scalar chi = b.chi(0);
    return -Scalar(0.5) * std::log(Scalar(2) * std::numbers::pi_v<Scalar> * s2 / b.nu) -
           chi * chi / (Scalar(2) * b.nu * s2);
  }

  /// log density of the belief at theta (a parameter vector of size 1).
  Scalar log_density(const BeliefType& b, const Vector<Scalar>& theta) const {
    const Scalar m = mean(b);
    const Scalar v = variance(b);
    const Scalar d = theta(0) - m;
    return -Scalar(0.5) * (std::log(Scalar(2) * std::numbers::pi_v<Scalar> * v) + d * d / v);
  }

  Scalar log_likelihood(Obs y, const Vector<Scalar>& theta) const {
    const Scalar d = y - theta(0);
    const Scalar s2 = sigma_ * sigma_;
    return -Scalar(0.5) * (std::log(Scalar(2) * std::numbers::pi_v<Scalar> * s2) + d * d / s2);
  }

  /// log P(y; belief): Normal at y with mean chi/nu and variance sigma^2 (1 + 1/nu).
  Scalar log_predictive(const BeliefType& b, Obs y) const {
    const Scalar m = b.chi(0) / b.nu;
    const Scalar v = sigma_ * sigma_ * (Scalar(1) + Scalar(1) / b.nu);
    const Scalar d = y - m;
    return -Scalar(0.5) * (std::log(Scalar(2) * std::numbers::pi_v<Scalar> * v) + d * d / v);
  }

  /// log P(y; .) for a batch of beliefs stored column-wise (chi: 1 x n).
  template <class ChiDerived, class NuDerived>
  Array<Scalar> log_predictive(const Eigen::MatrixBase<ChiDerived>& chi, const Eigen::ArrayBase<NuDerived>& nu,
                               Obs y) const {
    const Array<Scalar> var = sigma_ * sigma_ * (Scalar(1) + nu.inverse());
    const Array<Scalar> d = y - chi.row(0).transpose().array() / nu;
    return -Scalar(0.5) * ((Scalar(2) * std::numbers::pi_v<Scalar> * var).log() + d.square() / var);
  }

  BeliefType bayes_update(const BeliefType& b, Obs y) const {
    BeliefType out = b;
    out.chi(0) += y;
    out.nu += Scalar(1);
    return out;
  }

  /// P~(theta | y) = P_Y(y | theta) / int P_Y(y | theta') dtheta' = N(theta; y, sigma^2).
  BeliefType scaled_likelihood(Obs y) const { return BeliefType{Vector<Scalar>::Constant(1, y), Scalar(1)}; }

  Scalar kl(const BeliefType& from, const BeliefType& to) const {
    check(from);
    check(to);
    const Scalar v1 = variance(from);
    const Scalar v2 = variance(to);
    const Scalar d = mean(from) - mean(to);
    return Scalar(0.5) * (std::log(v2 / v1) + (v1 + d * d) / v2 - Scalar(1));
  }

  Vector<Scalar> point_estimate(const BeliefType& b) const { return Vector<Scalar>::Constant(1, mean(b)); }

  /// Column-wise posterior means of a batch of beliefs.
  template <class ChiDerived, class NuDerived>
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> point_estimates(const Eigen::MatrixBase<ChiDerived>& chi,
                                                                         const Eigen::ArrayBase<NuDerived>& nu) const {
    return (chi.array().rowwise() / nu.transpose()).matrix();
  }

  Vector<Scalar> sample_param(Rng& rng) const {
    return Vector<Scalar>::Constant(1, rng.normal(prior_mean_, std::sqrt(prior_var_)));
  }

  Obs sample_obs(const Vector<Scalar>& theta, Rng& rng) const { return rng.normal(theta(0), sigma_); }

 private:
  Scalar sigma_;
  Scalar prior_mean_;
  Scalar prior_var_;
};

/// Categorical likelihood over K categories with a Dirichlet(prior_alpha) prior.
template <typename Scalar = double>
class CategoricalDirichlet {
 public:
  using ScalarType = Scalar;
  using Obs = Category;
  using BeliefType = Belief<Scalar>;

  explicit CategoricalDirichlet(Vector<Scalar> prior_alpha) : prior_alpha_(std::move(prior_alpha)) {
    require(prior_alpha_.size() >= 2, "CategoricalDirichlet: need at least 2 categories");
    require((prior_alpha_.array() > Scalar(0)).all() && prior_alpha_.allFinite(),
            "CategoricalDirichlet: prior concentrations must be finite and > 0");
  }

  /// Symmetric Dir(s * 1) prior over K categories.
  static CategoricalDirichlet symmetric(int categories, Scalar s) {
    require(categories >= 2, "CategoricalDirichlet: need at least 2 categories");
    require(s > Scalar(0), "CategoricalDirichlet: stochasticity s must be > 0");
    return CategoricalDirichlet(Vector<Scalar>::Constant(categories, s));
  }

  static constexpr const char* name() { return "categorical-dirichlet"; }
  Eigen::Index dim() const { return prior_alpha_.size(); }
  int num_categories() const { return static_cast<int>(prior_alpha_.size()); }
  const Vector<Scalar>& prior_alpha() const { return prior_alpha_; }

  BeliefType prior() const { return BeliefType{prior_alpha_, Scalar(0)}; }

  bool valid(const BeliefType& b) const {
    return b.chi.size() == prior_alpha_.size() && b.chi.allFinite() && (b.chi.array() > Scalar(0)).all();
  }

  void check(const BeliefType& b) const {
    if (!valid(b)) throw DomainError("dirichlet belief needs K finite concentrations > 0");
  }

  void check(Obs y) const {
    if (y.index < 1 || y.index > num_categories())
      throw ContractViolation("category index " + std::to_string(y.index) + " outside [1, K]");
  }

  Vector<Scalar> sufficient(Obs y) const {
    check(y);
    Vector<Scalar> phi = Vector<Scalar>::Zero(dim());
    phi(y.index - 1) = Scalar(1);
    return phi;
  }

  /// log Gamma(sum alpha) - sum log Gamma(alpha).
  Scalar log_norm(const BeliefType& b) const {
    check(b);
    Scalar acc = log_gamma(b.chi.sum());
    for (Eigen::Index k = 0; k < b.chi.size(); ++k) acc -= log_gamma(b.chi(k));
    return acc;
  }

  Scalar log_density(const BeliefType& b, const Vector<Scalar>& p) const {
    return log_norm(b) + ((b.chi.array() - Scalar(1)) * p.array().log()).sum();
  }

  Scalar log_likelihood(Obs y, const Vector<Scalar>& p) const { return std::log(p(y.index - 1)); }

  /// log P(y; belief) = log(alpha_y / sum alpha).
  Scalar log_predictive(const BeliefType& b, Obs y) const {
    check(y);
    return std::log(b.chi(y.index - 1)) - std::log(b.chi.sum());
  }

  template <class ChiDerived, class NuDerived>
  Array<Scalar> log_predictive(const Eigen::MatrixBase<ChiDerived>& chi, const Eigen::ArrayBase<NuDerived>& /*nu*/,
                               Obs y) const {
    check(y);
    return chi.row(y.index - 1).transpose().array().log() - chi.colwise().sum().transpose().array().log();
  }

  BeliefType bayes_update(const BeliefType& b, Obs y) const {
    check(y);
    BeliefType out = b;
    out.chi(y.index - 1) += Scalar(1);
    out.nu += Scalar(1);
    return out;
  }

  /// The density proportional to p_y on the simplex: Dir(1 + e_y).
  BeliefType scaled_likelihood(Obs y) const {
    check(y);
    BeliefType b{Vector<Scalar>::Ones(dim()), Scalar(1)};
    b.chi(y.index - 1) += Scalar(1);
    return b;
  }

  Scalar kl(const BeliefType& from, const BeliefType& to) const {
    check(from);
    check(to);
    const Scalar a0 = from.chi.sum();
    const Scalar b0 = to.chi.sum();
    Scalar acc = log_gamma(a0) - log_gamma(b0);
    const Scalar psi0 = digamma(a0);
    for (Eigen::Index k = 0; k < from.chi.size(); ++k) {
      const Scalar a = from.chi(k);
      const Scalar b = to.chi(k);
      acc += log_gamma(b) - log_gamma(a) + (a - b) * (digamma(a) - psi0);
    }
    // Rounding can leave -1e-16 for identical arguments.
    return acc < Scalar(0) ? Scalar(0) : acc;
  }

  Vector<Scalar> point_estimate(const BeliefType& b) const { return b.chi / b.chi.sum(); }

  template <class ChiDerived, class NuDerived>
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> point_estimates(const Eigen::MatrixBase<ChiDerived>& chi,
                                                                         const Eigen::ArrayBase<NuDerived>& /*nu*/) const {
    return (chi.array().rowwise() / chi.colwise().sum().array()).matrix();
  }

  Vector<Scalar> sample_param(Rng& rng) const {
    Array<Scalar> logs(dim());
    for (Eigen::Index k = 0; k < dim(); ++k) logs(k) = rng.log_gamma_variate(prior_alpha_(k));
    const Scalar norm = log_sum_exp(logs);
    return (logs - norm).exp().matrix();
  }

  Obs sample_obs(const Vector<Scalar>& p, Rng& rng) const {
    const Scalar u = rng.uniform() * p.sum();
    Scalar acc(0);
    int last_positive = 1;
    for (Eigen::Index k = 0; k < p.size(); ++k) {
      if (p(k) <= Scalar(0)) continue;
      last_positive = static_cast<int>(k) + 1;
      acc += p(k);
      if (u < acc) return Category{last_positive};
    }
    return Category{last_positive};
  }

 private:
  Vector<Scalar> prior_alpha_;
};

using GaussianModel = GaussianKnownVariance<double>;
using CategoricalModel = CategoricalDirichlet<double>;

/// Runtime choice of likelihood family.
using ConjugateModel = std::variant<GaussianModel, CategoricalModel>;

namespace detail {

template <class Family>
typename Family::Obs observation_as(const Observation& y) {
  const auto* value = std::get_if<typename Family::Obs>(&y);
  if (value == nullptr) throw ContractViolation("observation type does not match the model family");
  return *value;
}

}  // namespace detail

inline Beliefd prior_belief(const ConjugateModel& model) {
  return std::visit([](const auto& f) { return f.prior(); }, model);
}

inline Eigen::Index parameter_dim(const ConjugateModel& model) {
  return std::visit([](const auto& f) { return f.dim(); }, model);
}

inline double log_norm(const ConjugateModel& model, const Beliefd& belief) {
  return std::visit([&](const auto& f) { return f.log_norm(belief); }, model);
}

inline double log_predictive(const ConjugateModel& model, const Beliefd& belief, const Observation& y) {
  return std::visit(
      [&](const auto& f) {
        using F = std::decay_t<decltype(f)>;
        f.check(belief);
        return f.log_predictive(belief, detail::observation_as<F>(y));
      },
      model);
}

/// P(y; belief) = int P_Y(y | theta) belief(theta) dtheta.
inline double predictive(const ConjugateModel& model, const Beliefd& belief, const Observation& y) {
  return std::exp(log_predictive(model, belief, y));
}

inline Beliefd bayes_update(const ConjugateModel& model, const Beliefd& belief, const Observation& y) {
  return std::visit(
      [&](const auto& f) {
        using F = std::decay_t<decltype(f)>;
        return f.bayes_update(belief, detail::observation_as<F>(y));
      },
      model);
}

inline Beliefd scaled_likelihood(const ConjugateModel& model, const Observation& y) {
  return std::visit(
      [&](const auto& f) {
        using F = std::decay_t<decltype(f)>;
        return f.scaled_likelihood(detail::observation_as<F>(y));
      },
      model);
}

inline double kl(const ConjugateModel& model, const Beliefd& from, const Beliefd& to) {
  return std::visit([&](const auto& f) { return f.kl(from, to); }, model);
}

inline Vector<double> point_estimate(const ConjugateModel& model, const Beliefd& belief) {
  return std::visit([&](const auto& f) { return f.point_estimate(belief); }, model);
}

inline Vector<double> sample_param(const ConjugateModel& model, Rng& rng) {
  return std::visit([&](const auto& f) { return f.sample_param(rng); }, model);
}

inline Observation sample_obs(const ConjugateModel& model, const Vector<double>& theta, Rng& rng) {
  return std::visit([&](const auto& f) { return Observation{f.sample_obs(theta, rng)}; }, model);
}

}  // namespace smile
