#include "mvp/nuts.hpp"

#include <cmath>

namespace mvp {

namespace {

double log_sum_exp(double a, double b) {
  if (a == -kInf) return b;
  if (b == -kInf) return a;
  const double m = std::max(a, b);
  return m + std::log(std::exp(a - m) + std::exp(b - m));
}

bool no_u_turn(const Vec& p_sharp_minus, const Vec& p_sharp_plus, const Vec& rho) {
  return p_sharp_plus.dot(rho) > 0 && p_sharp_minus.dot(rho) > 0;
}

class Tree {
 public:
  Tree(const LogDensityFn& f, const HmcConfig& cfg, const Vec& inv_mass, Rng& rng)
      : f_(f), cfg_(cfg), inv_mass_(inv_mass), rng_(rng) {}

  int n_leapfrog = 0;
  double sum_metro_prob = 0.0;
  bool divergent = false;

  // Extends `z` by 2^depth leapfrog steps in direction `sign`.
  bool build(int depth, PhasePoint& z, PhasePoint& z_propose, Vec& p_sharp_beg, Vec& p_sharp_end,
             Vec& rho, Vec& p_beg, Vec& p_end, double h0, double sign, double& log_sum_weight) {
    if (depth == 0) {
      double h;
      try {
        leapfrog(z, sign * cfg_.step_size, 1, f_, inv_mass_);
        h = hamiltonian(z, inv_mass_);
        if (std::isnan(h)) h = kInf;
      } catch (const DivergentTrajectory&) {
        h = kInf;
      }
      ++n_leapfrog;
      if (h - h0 > cfg_.max_delta_h) divergent = true;
      log_sum_weight = log_sum_exp(log_sum_weight, h0 - h);
      sum_metro_prob += h0 - h > 0 ? 1.0 : std::exp(h0 - h);
      z_propose = z;
      p_sharp_beg = z.momentum.cwiseProduct(inv_mass_);
      p_sharp_end = p_sharp_beg;
      rho += z.momentum;
      p_beg = z.momentum;
      p_end = p_beg;
      return !divergent;
    }

    const int n = static_cast<int>(z.theta.size());
    Vec rho_init = Vec::Zero(n);
    Vec p_init_end, p_sharp_init_end;
    double lsw_init = -kInf;
    if (!build(depth - 1, z, z_propose, p_sharp_beg, p_sharp_init_end, rho_init, p_beg, p_init_end,
               h0, sign, lsw_init))
      return false;

    PhasePoint z_propose_final;
    Vec rho_final = Vec::Zero(n);
    Vec p_final_beg, p_sharp_final_beg;
    double lsw_final = -kInf;
    if (!build(depth - 1, z, z_propose_final, p_sharp_final_beg, p_sharp_end, rho_final,
               p_final_beg, p_end, h0, sign, lsw_final))
      return false;

    const double lsw_subtree = log_sum_exp(lsw_init, lsw_final);
    log_sum_weight = log_sum_exp(log_sum_weight, lsw_subtree);
    if (lsw_final > lsw_subtree || uniform01(rng_) < std::exp(lsw_final - lsw_subtree))
      z_propose = z_propose_final;

    const Vec rho_subtree = rho_init + rho_final;
    rho += rho_subtree;
    bool persist = no_u_turn(p_sharp_beg, p_sharp_end, rho_subtree);
    persist = persist && no_u_turn(p_sharp_beg, p_sharp_final_beg, rho_init + p_final_beg);
    persist = persist && no_u_turn(p_sharp_init_end, p_sharp_end, rho_final + p_init_end);
    return persist;
  }

 private:
  const LogDensityFn& f_;
  const HmcConfig& cfg_;
  const Vec& inv_mass_;
  Rng& rng_;
};

Vec effective_inv_mass(const HmcConfig& cfg, int n) {
  if (cfg.inv_mass.size() == 0) return Vec::Ones(n);
  if (cfg.inv_mass.size() != n) throw std::invalid_argument("mass matrix dimension mismatch");
  return cfg.inv_mass;
}

Vec draw_momentum(const Vec& inv_mass, Rng& rng) {
  Vec p(inv_mass.size());
  for (int i = 0; i < p.size(); ++i) p[i] = std_normal(rng) / std::sqrt(inv_mass[i]);
  return p;
}

PhasePoint start_point(const LogDensityFn& f, const Vec& theta0) {
  PhasePoint z{theta0, Vec(), Vec(), 0.0};
  try {
    z.log_density = f(z.theta, z.grad);
  } catch (const std::domain_error& e) {
    throw std::runtime_error(std::string("NUTS started at an invalid point: ") + e.what());
  }
  if (!std::isfinite(z.log_density) || !z.grad.allFinite())
    throw std::runtime_error("NUTS started at a point with non-finite density");
  return z;
}

}  // namespace

void HmcConfig::validate() const {
  if (!(step_size > 0) || !std::isfinite(step_size))
    throw std::invalid_argument("hmc step size must be positive");
  if (!(target_accept > 0 && target_accept < 1))
    throw std::invalid_argument("hmc target acceptance must lie in (0, 1)");
  if (max_depth < 1) throw std::invalid_argument("hmc max depth must be >= 1");
  if (!(max_delta_h > 0)) throw std::invalid_argument("divergence threshold must be positive");
  if (!(gamma > 0) || !(t0 > 0) || !(kappa > 0))
    throw std::invalid_argument("dual-averaging constants must be positive");
  if (inv_mass.size() > 0 && (inv_mass.array() <= 0).any())
    throw std::invalid_argument("mass matrix diagonal must be positive");
}

void HmcConfig::restart() {
  mu = std::log(10.0 * step_size);
  s_bar = 0.0;
  x_bar = 0.0;
  counter = 0;
}

void init_step_size(const LogDensityFn& f, const Vec& theta0, HmcConfig& cfg, Rng& rng) {
  cfg.validate();
  const Vec inv_mass = effective_inv_mass(cfg, static_cast<int>(theta0.size()));
  const PhasePoint start = start_point(f, theta0);
  const double log_target = std::log(0.8);

  auto one_step_delta = [&]() {
    PhasePoint z = start;
    z.momentum = draw_momentum(inv_mass, rng);
    const double h0 = hamiltonian(z, inv_mass);
    double h;
    try {
      leapfrog(z, cfg.step_size, 1, f, inv_mass);
      h = hamiltonian(z, inv_mass);
      if (std::isnan(h)) h = kInf;
    } catch (const DivergentTrajectory&) {
      h = kInf;
    }
    return h0 - h;
  };

  const int direction = one_step_delta() > log_target ? 1 : -1;
  for (int iter = 0; iter < 100; ++iter) {
    const double delta = one_step_delta();
    if (direction == 1 && !(delta > log_target)) break;
    if (direction == -1 && !(delta < log_target)) break;
    cfg.step_size = direction == 1 ? 2.0 * cfg.step_size : 0.5 * cfg.step_size;
    if (cfg.step_size > 1e7) throw std::runtime_error("step-size search diverged: target looks improper");
    if (cfg.step_size < 1e-12) throw std::runtime_error("step-size search collapsed to zero");
  }
  cfg.step_size_initialised = true;
  cfg.restart();
}

NutsTransition nuts_sample(const LogDensityFn& f, const Vec& theta0, HmcConfig& cfg, bool adapting,
                           Rng& rng) {
  if (adapting && !cfg.step_size_initialised) init_step_size(f, theta0, cfg, rng);
  cfg.validate();
  const int n = static_cast<int>(theta0.size());
  const Vec inv_mass = effective_inv_mass(cfg, n);

  PhasePoint z = start_point(f, theta0);
  z.momentum = draw_momentum(inv_mass, rng);
  const double h0 = hamiltonian(z, inv_mass);

  PhasePoint z_fwd = z, z_bck = z, z_sample = z, z_propose = z;
  Vec p_fwd_fwd = z.momentum, p_fwd_bck = z.momentum, p_bck_fwd = z.momentum,
      p_bck_bck = z.momentum;
  const Vec p_sharp0 = z.momentum.cwiseProduct(inv_mass);
  Vec ps_fwd_fwd = p_sharp0, ps_fwd_bck = p_sharp0, ps_bck_fwd = p_sharp0, ps_bck_bck = p_sharp0;
  Vec rho = z.momentum;
  double log_sum_weight = 0.0;

  Tree tree(f, cfg, inv_mass, rng);
  int depth = 0;
  while (depth < cfg.max_depth) {
    Vec rho_fwd = Vec::Zero(n), rho_bck = Vec::Zero(n);
    double lsw_subtree = -kInf;
    bool valid;
    if (uniform01(rng) > 0.5) {
      rho_bck = rho;
      p_bck_fwd = p_fwd_bck;
      ps_bck_fwd = ps_fwd_bck;
      valid = tree.build(depth, z_fwd, z_propose, ps_fwd_bck, ps_fwd_fwd, rho_fwd, p_fwd_bck,
                         p_fwd_fwd, h0, 1.0, lsw_subtree);
    } else {
      rho_fwd = rho;
      p_fwd_bck = p_bck_fwd;
      ps_fwd_bck = ps_bck_fwd;
      valid = tree.build(depth, z_bck, z_propose, ps_bck_fwd, ps_bck_bck, rho_bck, p_bck_fwd,
                         p_bck_bck, h0, -1.0, lsw_subtree);
    }
    if (!valid) break;
    ++depth;

    if (lsw_subtree > log_sum_weight || uniform01(rng) < std::exp(lsw_subtree - log_sum_weight))
      z_sample = z_propose;
    log_sum_weight = log_sum_exp(log_sum_weight, lsw_subtree);

    rho = rho_bck + rho_fwd;
    bool persist = no_u_turn(ps_bck_bck, ps_fwd_fwd, rho);
    persist = persist && no_u_turn(ps_bck_bck, ps_fwd_bck, rho_bck + p_fwd_bck);
    persist = persist && no_u_turn(ps_bck_fwd, ps_fwd_fwd, rho_fwd + p_bck_fwd);
    if (!persist) break;
  }

  NutsTransition out;
  out.theta = z_sample.theta;
  out.log_density = z_sample.log_density;
  out.depth = depth;
  out.n_leapfrog = tree.n_leapfrog;
  out.divergent = tree.divergent;
  out.accept_stat = tree.n_leapfrog > 0 ? tree.sum_metro_prob / tree.n_leapfrog : 0.0;

  if (adapting) {
    ++cfg.counter;
    const double stat = std::min(1.0, out.accept_stat);
    const double c = static_cast<double>(cfg.counter);
    const double eta = 1.0 / (c + cfg.t0);
    cfg.s_bar = (1.0 - eta) * cfg.s_bar + eta * (cfg.target_accept - stat);
    const double x = cfg.mu - cfg.s_bar * std::sqrt(c) / cfg.gamma;
    const double x_eta = std::pow(c, -cfg.kappa);
    cfg.x_bar = (1.0 - x_eta) * cfg.x_bar + x_eta * x;
    cfg.step_size = std::exp(x);
  }
  return out;
}

void finish_adaptation(HmcConfig& cfg) {
  if (cfg.counter > 0) cfg.step_size = std::exp(cfg.x_bar);
}

}  // namespace mvp
