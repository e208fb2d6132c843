#include "mvp/samplers.hpp"

#include <boost/math/special_functions/erf.hpp>

#include <cmath>

namespace mvp {

namespace {

constexpr double kSqrt2 = 1.41421356237309504880;
constexpr double kInvSqrt2Pi = 0.39894228040143267794;
constexpr double kTailStart = 4.0;

// Standard normal restricted to (a, b) with a >= kTailStart. Robert (1995)
// translated-exponential proposal; narrow intervals fall back to a uniform
// proposal, which then has acceptance at least exp(-1).
double sample_upper_tail(double a, double b, Rng& rng) {
  if (b - a < 1.0 / a) {
    for (;;) {
      const double x = a + (b - a) * uniform01(rng);
      if (uniform01(rng) <= std::exp(-0.5 * (x * x - a * a))) return x;
    }
  }
  const double rate = 0.5 * (a + std::sqrt(a * a + 4.0));
  std::exponential_distribution<double> expo(rate);
  for (;;) {
    const double x = a + expo(rng);
    if (x >= b) continue;
    const double diff = x - rate;
    if (uniform01(rng) <= std::exp(-0.5 * diff * diff)) return x;
  }
}

}  // namespace

double norm_cdf(double x) { return 0.5 * boost::math::erfc(-x / kSqrt2); }
double norm_sf(double x) { return 0.5 * boost::math::erfc(x / kSqrt2); }
double norm_pdf(double x) { return kInvSqrt2Pi * std::exp(-0.5 * x * x); }
double norm_quantile(double p) { return -kSqrt2 * boost::math::erfc_inv(2.0 * p); }
double norm_isf(double q) { return kSqrt2 * boost::math::erfc_inv(2.0 * q); }

double sample_truncated_normal(double mu, double sigma, double lo, double hi, Rng& rng) {
  if (!(sigma > 0)) throw std::invalid_argument("truncated normal: sigma must be positive");
  if (!(lo < hi)) throw std::invalid_argument("truncated normal: empty interval (lo >= hi)");
  const double a = (lo - mu) / sigma;
  const double b = (hi - mu) / sigma;
  double z;
  if (a >= kTailStart) {
    z = sample_upper_tail(a, b, rng);
  } else if (b <= -kTailStart) {
    z = -sample_upper_tail(-b, -a, rng);
  } else if (a > 0.0) {
    // Work with upper-tail probabilities to keep precision.
    const double qa = norm_sf(a);
    const double qb = std::isinf(b) ? 0.0 : norm_sf(b);
    z = norm_isf(qb + (qa - qb) * uniform01(rng));
  } else {
    const double pa = std::isinf(a) ? 0.0 : norm_cdf(a);
    const double pb = std::isinf(b) ? 1.0 : norm_cdf(b);
    if (b < 0.0 || pb - pa > 0.0) {
      z = norm_quantile(pa + (pb - pa) * uniform01(rng));
    } else {
      z = 0.5 * (a + b);
    }
  }
  // Guard the open interval against rounding at the endpoints.
  z = std::clamp(z, a, b);
  double x = mu + sigma * z;
  if (x <= lo) x = std::nextafter(lo, hi);
  if (x >= hi) x = std::nextafter(hi, lo);
  return x;
}

}  // namespace mvp
