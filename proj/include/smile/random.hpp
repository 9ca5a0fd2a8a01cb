#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace smile {

/// Pseudo-random source keyed by (seed, stream).  Distinct streams of one
/// seed are statistically independent, so sweep cells can draw without
/// coordinating.
class Rng {
 public:
  using Engine = std::mt19937_64;

  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32),
                      0x5eedu};
    engine_.seed(seq);
  }

  Engine& engine() { return engine_; }

  double uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(engine_); }

  double normal(double mean, double sd) { return std::normal_distribution<double>(mean, sd)(engine_); }

  bool bernoulli(double p) {
    if (p >= 1.0) return true;
    if (p <= 0.0) return false;
    return uniform() < p;
  }

  /// log of a Gamma(shape, 1) variate.  Shapes below one are boosted via
  /// G(a) = G(a + 1) * U^(1/a) so tiny shapes do not underflow to zero.
  double log_gamma_variate(double shape) {
    if (shape >= 1.0) return std::log(std::gamma_distribution<double>(shape, 1.0)(engine_));
    const double boosted = std::log(std::gamma_distribution<double>(shape + 1.0, 1.0)(engine_));
    double u = uniform();
    while (u <= 0.0) u = uniform();
    return boosted + std::log(u) / shape;
  }

 private:
  Engine engine_;
};

}  // namespace smile
