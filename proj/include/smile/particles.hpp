#pragma once

#include <cmath>
#include <limits>
#include <vector>

#include <Eigen/Core>

#include "smile/errors.hpp"
#include "smile/expfam.hpp"
#include "smile/special.hpp"

namespace smile {

/// Weighted mixture of conjugate beliefs, stored column-wise so that the
/// per-step predictive and update are single Eigen expressions.  Weights are
/// kept as log-weights with a linear-scale mirror (callers that write one keep
/// the other in sync); run lengths are carried for the message-passing rules.
template <typename Scalar = double>
class ParticleSet {
 public:
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

  explicit ParticleSet(Eigen::Index dim = 1, Eigen::Index capacity = 8)
      : chi_(dim, capacity), nu_(capacity), log_w_(capacity), w_(capacity), run_(capacity) {}

  Eigen::Index size() const { return n_; }
  Eigen::Index dim() const { return chi_.rows(); }
  bool empty() const { return n_ == 0; }

  auto chi() { return chi_.leftCols(n_); }
  auto chi() const { return chi_.leftCols(n_); }
  auto nu() { return nu_.head(n_); }
  auto nu() const { return nu_.head(n_); }
  auto log_weights() { return log_w_.head(n_); }
  auto log_weights() const { return log_w_.head(n_); }
  auto weights() { return w_.head(n_); }
  auto weights() const { return w_.head(n_); }
  auto run_lengths() { return run_.head(n_); }
  auto run_lengths() const { return run_.head(n_); }

  Belief<Scalar> belief(Eigen::Index i) const { return {chi_.col(i), nu_(i)}; }

  void push_back(const Belief<Scalar>& b, Scalar log_w, int run_length = 0) {
    require(b.chi.size() == dim(), "ParticleSet: belief dimension mismatch");
    if (n_ == chi_.cols()) grow(2 * n_ + 1);
    chi_.col(n_) = b.chi;
    nu_(n_) = b.nu;
    log_w_(n_) = log_w;
    w_(n_) = std::exp(log_w);
    run_(n_) = run_length;
    ++n_;
  }

  void clear() { n_ = 0; }

  /// Adds phi to every particle's chi; zero entries of phi are skipped.
  void add_to_all(const Vector<Scalar>& phi) {
    for (Eigen::Index k = 0; k < phi.size(); ++k)
      if (phi(k) != Scalar(0)) chi_.row(k).head(n_).array() += phi(k);
  }

  /// Removes particle i, keeping the order of the others.
  void erase(Eigen::Index i) {
    require(i >= 0 && i < n_, "ParticleSet: erase index out of range");
    const Eigen::Index tail = n_ - i - 1;
    if (tail > 0) {
      chi_.middleCols(i, tail) = chi_.middleCols(i + 1, tail).eval();
      nu_.segment(i, tail) = nu_.segment(i + 1, tail).eval();
      log_w_.segment(i, tail) = log_w_.segment(i + 1, tail).eval();
      w_.segment(i, tail) = w_.segment(i + 1, tail).eval();
      run_.segment(i, tail) = run_.segment(i + 1, tail).eval();
    }
    --n_;
  }

  /// Drops every particle whose log-weight is below `threshold`; stable.
  Eigen::Index prune_below(Scalar threshold) {
    Eigen::Index kept = 0;
    for (Eigen::Index i = 0; i < n_; ++i) {
      if (!(log_w_(i) >= threshold)) continue;
      if (kept != i) {
        chi_.col(kept) = chi_.col(i);
        nu_(kept) = nu_(i);
        log_w_(kept) = log_w_(i);
        w_(kept) = w_(i);
        run_(kept) = run_(i);
      }
      ++kept;
    }
    const Eigen::Index dropped = n_ - kept;
    n_ = kept;
    return dropped;
  }

  /// Index of the smallest weight; the lowest index wins ties.
  Eigen::Index argmin_weight() const {
    require(n_ > 0, "ParticleSet: argmin of an empty set");
    Eigen::Index best = 0;
    for (Eigen::Index i = 1; i < n_; ++i)
      if (log_w_(i) < log_w_(best)) best = i;
    return best;
  }

  /// Shifts log-weights so that the weights sum to one and refreshes the linear mirror.
  void normalize() {
    const Scalar total = log_sum_exp(log_weights());
    if (!std::isfinite(total)) throw NumericError("ParticleSet: all weights vanished");
    log_weights() -= total;
    weights() = log_weights().exp();
  }

  /// Cheaper renormalization through the linear mirror, valid while it is in sync.
  void rescale() {
    const Scalar total = weights().sum();
    if (!(total > Scalar(0)) || !std::isfinite(total)) throw NumericError("ParticleSet: all weights vanished");
    if (total == Scalar(1)) return;
    weights() /= total;
    log_weights() -= std::log(total);
  }

  /// Replaces the set by the particles at `indices` (duplicates allowed) with uniform weights.
  void resample(const std::vector<Eigen::Index>& indices) {
    const auto m = static_cast<Eigen::Index>(indices.size());
    Matrix chi(dim(), m);
    Array<Scalar> nu(m);
    Eigen::ArrayXi run(m);
    for (Eigen::Index k = 0; k < m; ++k) {
      chi.col(k) = chi_.col(indices[k]);
      nu(k) = nu_(indices[k]);
      run(k) = run_(indices[k]);
    }
    if (m > chi_.cols()) grow(m);
    chi_.leftCols(m) = chi;
    nu_.head(m) = nu;
    run_.head(m) = run;
    log_w_.head(m).setConstant(-std::log(static_cast<Scalar>(m)));
    w_.head(m).setConstant(Scalar(1) / static_cast<Scalar>(m));
    n_ = m;
  }

 private:
  void grow(Eigen::Index capacity) {
    chi_.conservativeResize(Eigen::NoChange, capacity);
    nu_.conservativeResize(capacity);
    log_w_.conservativeResize(capacity);
    w_.conservativeResize(capacity);
    run_.conservativeResize(capacity);
  }

  Matrix chi_;
  Array<Scalar> nu_;
  Array<Scalar> log_w_;
  Array<Scalar> w_;
  Eigen::ArrayXi run_;
  Eigen::Index n_ = 0;
};

}  // namespace smile
