#pragma once

#include "mvp/linalg.hpp"

#include <cstdint>
#include <random>

namespace mvp {

/// One stream per chain; callers own their streams.
using Rng = std::mt19937_64;

/// Deterministic stream derived from a user seed and a stream index.
inline Rng make_rng(std::uint64_t seed, std::uint64_t stream = 0) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  return Rng(seq);
}

inline double std_normal(Rng& rng) { return std::normal_distribution<double>(0.0, 1.0)(rng); }

inline double uniform01(Rng& rng) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng); }

inline Vec std_normal_vec(int n, Rng& rng) {
  Vec z(n);
  for (int i = 0; i < n; ++i) z[i] = std_normal(rng);
  return z;
}

/// Gamma with shape/rate parameterisation.
inline double gamma_draw(double shape, double rate, Rng& rng) {
  return std::gamma_distribution<double>(shape, 1.0 / rate)(rng);
}

/// Inverse-gamma IG(shape, scale): density proportional to x^{-shape-1} exp(-scale/x).
inline double inv_gamma_draw(double shape, double scale, Rng& rng) {
  return scale / std::gamma_distribution<double>(shape, 1.0)(rng);
}

/// Standard half-Cauchy C+(0, 1).
inline double half_cauchy_draw(Rng& rng) {
  return std::abs(std::cauchy_distribution<double>(0.0, 1.0)(rng));
}

}  // namespace mvp
