#include "mvp/samplers.hpp"

#include <cmath>
#include <sstream>

namespace mvp {

ConditionalNormal conditional_normal_params(const Vec& mu, const Mat& sigma, int d,
                                            const Vec& x_minus_d) {
  const int n = static_cast<int>(mu.size());
  if (sigma.rows() != n || sigma.cols() != n || x_minus_d.size() != n - 1 || d < 0 || d >= n)
    throw std::invalid_argument("conditional_normal_params: inconsistent dimensions");
  if (n == 1) {
    if (!(sigma(0, 0) > 0)) throw std::domain_error("conditioning variance is not positive");
    return {mu[0], std::sqrt(sigma(0, 0))};
  }
  const Mat s22 = drop_index(sigma, d);
  Vec s12(n - 1), mu2(n - 1);
  for (int j = 0, k = 0; j < n; ++j) {
    if (j == d) continue;
    s12[k] = sigma(d, j);
    mu2[k++] = mu[j];
  }
  Eigen::LLT<Mat> llt(s22);
  if (llt.info() != Eigen::Success) throw std::domain_error("singular conditioning block");
  const Vec w = llt.solve(s12);
  const double var = sigma(d, d) - s12.dot(w);
  if (!(var > 0)) throw std::domain_error("conditional variance is not positive");
  return {mu[d] + w.dot(x_minus_d - mu2), std::sqrt(var)};
}

void validate(const ProposalMode& mode) {
  if (const auto* o = std::get_if<proposal::OverRelax>(&mode)) {
    if (!(o->kappa > -1.0 && o->kappa < 1.0))
      throw std::invalid_argument("over-relaxation kappa must lie in (-1, 1)");
  } else if (const auto* h = std::get_if<proposal::ExactGaussHmc>(&mode)) {
    if (!std::isfinite(h->t)) throw std::invalid_argument("HMC integration time must be finite");
  }
}

bool is_deterministic(const ProposalMode& mode) {
  if (std::holds_alternative<proposal::Antithetic>(mode)) return true;
  if (const auto* h = std::get_if<proposal::ExactGaussHmc>(&mode))
    return std::abs(std::sin(h->t)) < 1e-12;
  return false;
}

std::string to_string(const ProposalMode& mode) {
  std::ostringstream os;
  os.precision(17);
  if (std::holds_alternative<proposal::Independent>(mode)) os << "independent";
  else if (std::holds_alternative<proposal::Antithetic>(mode)) os << "antithetic";
  else if (const auto* o = std::get_if<proposal::OverRelax>(&mode)) os << "overrelax:" << o->kappa;
  else os << "hmc:" << std::get<proposal::ExactGaussHmc>(mode).t;
  return os.str();
}

ProposalMode parse_proposal_mode(const std::string& text) {
  const auto colon = text.find(':');
  const std::string head = text.substr(0, colon);
  auto arg = [&]() {
    if (colon == std::string::npos) throw std::invalid_argument("proposal mode '" + head + "' needs a value");
    std::size_t pos = 0;
    const std::string tail = text.substr(colon + 1);
    double v = 0.0;
    try {
      v = std::stod(tail, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos == 0 || pos != tail.size())
      throw std::invalid_argument("bad proposal parameter in '" + text + "'");
    return v;
  };
  ProposalMode mode;
  if (head == "independent" && colon == std::string::npos) mode = proposal::Independent{};
  else if (head == "antithetic" && colon == std::string::npos) mode = proposal::Antithetic{};
  else if (head == "overrelax") mode = proposal::OverRelax{arg()};
  else if (head == "hmc") mode = proposal::ExactGaussHmc{arg()};
  else throw std::invalid_argument("unknown proposal mode '" + text + "'");
  validate(mode);
  return mode;
}

Vec antithetic_step(const Vec& theta, const Vec& mu_cond) {
  if (theta.size() != mu_cond.size()) throw std::invalid_argument("antithetic_step: size mismatch");
  return 2.0 * mu_cond - theta;
}

double over_relax_step(double theta, double mu, double sigma, double kappa, Rng& rng) {
  if (!(kappa > -1.0 && kappa <= 1.0))
    throw std::invalid_argument("over-relaxation kappa must lie in (-1, 1]");
  if (!(sigma > 0)) throw std::invalid_argument("over-relaxation sigma must be positive");
  const double u = std_normal(rng);
  if (kappa == 1.0) return 2.0 * mu - theta;
  return (1.0 + kappa) * mu - kappa * theta + u * sigma * std::sqrt(1.0 - kappa * kappa);
}

Vec exact_gauss_hmc(const Vec& theta0, const Vec& u0, double t, const Vec& mu, const Mat& sigma) {
  if (theta0.size() != mu.size() || u0.size() != mu.size() || sigma.rows() != mu.size())
    throw std::invalid_argument("exact_gauss_hmc: inconsistent dimensions");
  const double s = std::sin(t);
  const double c = std::cos(t);
  // Multiples of pi leave a ~1e-16 sine; snap so the reflection is exact.
  if (std::abs(s) < 1e-12) return c > 0 ? theta0 : antithetic_step(theta0, mu);
  return mu + s * (sigma * u0) + c * (theta0 - mu);
}

Vec gaussian_block_move(const Vec& theta, const Vec& mean, const Eigen::LLT<Mat>& precision_llt,
                        const ProposalMode& mode, Rng& rng) {
  // L^{-T} z has covariance (L L')^{-1}.
  auto noise = [&]() {
    Vec z = std_normal_vec(static_cast<int>(mean.size()), rng);
    precision_llt.matrixU().solveInPlace(z);
    return z;
  };
  if (std::holds_alternative<proposal::Independent>(mode)) return mean + noise();
  if (std::holds_alternative<proposal::Antithetic>(mode)) return antithetic_step(theta, mean);
  if (const auto* o = std::get_if<proposal::OverRelax>(&mode)) {
    const double k = o->kappa;
    return (1.0 + k) * mean - k * theta + std::sqrt(1.0 - k * k) * noise();
  }
  const double t = std::get<proposal::ExactGaussHmc>(mode).t;
  // Momentum u0 ~ N(0, Sigma^{-1}) makes Sigma u0 ~ N(0, Sigma).
  if (std::abs(std::sin(t)) < 1e-12) return std::cos(t) > 0 ? theta : antithetic_step(theta, mean);
  return mean + std::sin(t) * noise() + std::cos(t) * (theta - mean);
}

double hamiltonian(const PhasePoint& point, const Vec& inv_mass) {
  return -point.log_density + 0.5 * point.momentum.cwiseProduct(inv_mass).dot(point.momentum);
}

void leapfrog(PhasePoint& p, double eps, int n_steps, const LogDensityFn& log_density,
              const Vec& inv_mass) {
  if (eps == 0.0 || !std::isfinite(eps) || n_steps < 1)
    throw std::invalid_argument("leapfrog needs a finite non-zero step and n >= 1");
  for (int s = 0; s < n_steps; ++s) {
    p.momentum += 0.5 * eps * p.grad;
    p.theta += eps * p.momentum.cwiseProduct(inv_mass);
    double lp;
    try {
      lp = log_density(p.theta, p.grad);
    } catch (const std::domain_error& e) {
      throw DivergentTrajectory(e.what());
    }
    if (!std::isfinite(lp) || !p.grad.allFinite())
      throw DivergentTrajectory("non-finite log density or gradient");
    p.log_density = lp;
    p.momentum += 0.5 * eps * p.grad;
  }
}

std::pair<Vec, Vec> leapfrog(const Vec& theta, const Vec& u, double eps, int n_steps,
                             const LogDensityFn& log_density, const Vec& inv_mass) {
  PhasePoint p{theta, u, Vec(), 0.0};
  p.log_density = log_density(p.theta, p.grad);
  leapfrog(p, eps, n_steps, log_density, inv_mass);
  return {p.theta, p.momentum};
}

}  // namespace mvp
