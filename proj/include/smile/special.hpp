#pragma once

#include <cmath>
#include <limits>

#include <Eigen/Core>
#include <boost/math/special_functions/digamma.hpp>

namespace smile {

template <typename Scalar>
Scalar log_gamma(Scalar x) {
  return std::lgamma(x);
}

template <typename Scalar>
Scalar digamma(Scalar x) {
  return boost::math::digamma(x);
}

/// log(exp(a) + exp(b)) without overflow; tolerates -inf operands.
template <typename Scalar>
Scalar log_add_exp(Scalar a, Scalar b) {
  if (a == -std::numeric_limits<Scalar>::infinity()) return b;
  if (b == -std::numeric_limits<Scalar>::infinity()) return a;
  const Scalar hi = a > b ? a : b;
  const Scalar lo = a > b ? b : a;
  return hi + std::log1p(std::exp(lo - hi));
}

/// log(1 + exp(x)).
template <typename Scalar>
Scalar softplus(Scalar x) {
  if (x > Scalar(0)) return x + std::log1p(std::exp(-x));
  return std::log1p(std::exp(x));
}

template <typename Derived>
typename Derived::Scalar log_sum_exp(const Eigen::ArrayBase<Derived>& values) {
  using Scalar = typename Derived::Scalar;
  if (values.size() == 0) return -std::numeric_limits<Scalar>::infinity();
  const Scalar hi = values.maxCoeff();
  if (!std::isfinite(hi)) return hi;
  return hi + std::log((values - hi).exp().sum());
}

}  // namespace smile
