#pragma once

// Elementary update kernels shared by the Gibbs engine: truncated normal
// draws, Gaussian conditionals, and the over-relaxation / antithetic /
// exact-Hamiltonian family of Gaussian moves.

#include "mvp/linalg.hpp"
#include "mvp/random.hpp"

#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>

namespace mvp {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

double norm_cdf(double x);
/// Upper tail 1 - Phi(x), accurate for large x.
double norm_sf(double x);
double norm_quantile(double p);
/// Inverse of the upper tail.
double norm_isf(double q);
double norm_pdf(double x);

/// Draw from N(mu, sigma^2) restricted to (lo, hi). Inverse CDF in the bulk,
/// exponential rejection beyond four standard deviations; any tail depth.
double sample_truncated_normal(double mu, double sigma, double lo, double hi, Rng& rng);

struct ConditionalNormal {
  double mean;
  double sd;
};

/// Distribution of x_d given x_{-d} under N(mu, sigma). `x_minus_d` holds
/// the other D-1 coordinates in their original order.
ConditionalNormal conditional_normal_params(const Vec& mu, const Mat& sigma, int d,
                                            const Vec& x_minus_d);

/// Same conditional computed from the precision matrix and a full vector x
/// (x_d is ignored).
inline ConditionalNormal conditional_from_precision(const Mat& precision, const Vec& mu,
                                                    const Vec& x, int d) {
  const double qdd = precision(d, d);
  double acc = 0.0;
  for (int j = 0; j < x.size(); ++j)
    if (j != d) acc += precision(d, j) * (x[j] - mu[j]);
  return {mu[d] - acc / qdd, 1.0 / std::sqrt(qdd)};
}

namespace proposal {
struct Independent {};
struct Antithetic {};
/// kappa in (-1, 1); the ergodic over-relaxation range.
struct OverRelax {
  double kappa;
};
/// Integration time of the exact Gaussian Hamiltonian flow, radians.
struct ExactGaussHmc {
  double t;
};
}  // namespace proposal

using ProposalMode = std::variant<proposal::Independent, proposal::Antithetic,
                                  proposal::OverRelax, proposal::ExactGaussHmc>;

void validate(const ProposalMode& mode);
bool is_deterministic(const ProposalMode& mode);
std::string to_string(const ProposalMode& mode);
/// "independent", "antithetic", "overrelax:<kappa>", "hmc:<t>".
ProposalMode parse_proposal_mode(const std::string& text);

/// psi(theta) = 2 mu - theta.
Vec antithetic_step(const Vec& theta, const Vec& mu_cond);

/// (1 + kappa) mu - kappa theta + u sigma sqrt(1 - kappa^2), u ~ N(0, 1).
/// kappa = 1 reduces to the antithetic reflection.
double over_relax_step(double theta, double mu, double sigma, double kappa, Rng& rng);

/// Exact flow of the Hamiltonian for N(mu, sigma) with momentum
/// precision sigma: mu + sigma u0 sin t + (theta0 - mu) cos t.
Vec exact_gauss_hmc(const Vec& theta0, const Vec& u0, double t, const Vec& mu, const Mat& sigma);

/// Applies `mode` to a Gaussian block N(mean, precision^{-1}) given the
/// Cholesky factorisation of the precision. All non-deterministic modes use
/// one standard-normal vector.
Vec gaussian_block_move(const Vec& theta, const Vec& mean, const Eigen::LLT<Mat>& precision_llt,
                        const ProposalMode& mode, Rng& rng);

/// Thrown when a trajectory produces a non-finite gradient or energy.
class DivergentTrajectory : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Returns log pi(theta) and writes its gradient.
using LogDensityFn = std::function<double(const Vec& theta, Vec& grad)>;

struct PhasePoint {
  Vec theta;
  Vec momentum;
  Vec grad;
  double log_density = 0.0;
};

/// n leapfrog steps of size eps under a diagonal mass matrix (given as its
/// inverse diagonal). `point.grad` and `point.log_density` must be current
/// on entry and are current on exit.
void leapfrog(PhasePoint& point, double eps, int n_steps, const LogDensityFn& log_density,
              const Vec& inv_mass);

/// Convenience overload returning (theta', u').
std::pair<Vec, Vec> leapfrog(const Vec& theta, const Vec& u, double eps, int n_steps,
                             const LogDensityFn& log_density, const Vec& inv_mass);

/// H = -log pi(theta) + u' M^{-1} u / 2.
double hamiltonian(const PhasePoint& point, const Vec& inv_mass);

}  // namespace mvp
