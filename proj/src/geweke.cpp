#include "mvp/geweke.hpp"

#include "mvp/priors.hpp"
#include "mvp/simulate.hpp"

#include <cmath>
#include <iomanip>
#include <sstream>

namespace mvp {

namespace {

constexpr std::uint64_t kPriorStream = 11;
constexpr std::uint64_t kDesignStream = 12;
constexpr std::uint64_t kPilotStream = 13;
constexpr std::uint64_t kChainStream = 1000;

double bounded_log(double x) { return std::atan(std::log(x)); }

}  // namespace

void GewekeConfig::validate() const {
  spec.validate();
  if (spec.n_individual != 0) throw std::invalid_argument("joint test covers the observation-level model");
  if (n_individuals < 1 || n_periods < 1) throw std::invalid_argument("panel dimensions must be positive");
  if (prior_draws < 10) throw std::invalid_argument("joint test needs at least 10 draws");
  if (burn_in < 0) throw std::invalid_argument("burn-in must be >= 0");
  if (chains < 2) throw std::invalid_argument("joint test needs at least 2 chains");
  if (sweeps / chains < 10) throw std::invalid_argument("fewer than 10 sweeps per chain");
  const int d = spec.n_outcomes;
  const int params = spec.n_beta() + vechl_size(d) + d * (d + 1) / 2 + d * n_individuals;
  if (params >= 50) throw std::invalid_argument("joint test is meant for fewer than 50 parameters");
  mvp::validate(beta_mode);
  mvp::validate(alpha_mode);
}

GewekeConfig GewekeConfig::small(BetaPriorKind beta, SigmaAlphaPriorKind sigma) {
  GewekeConfig c;
  c.spec.n_outcomes = 2;
  c.spec.n_covariates = 2;
  c.spec.priors.beta = beta;
  c.spec.priors.beta_variance = 1.0;
  c.spec.priors.intercept_variance = 1.0;
  c.spec.priors.sigma_alpha = sigma;
  // Finite prior moments keep the comparison well conditioned.
  c.spec.priors.iw_df = 5.0;
  c.spec.priors.hiw_df = 2.0;
  return c;
}

PriorDraw draw_from_prior(const ModelSpec& spec, int n_individuals, Rng& rng) {
  const int d = spec.n_outcomes;
  PriorDraw p;
  if (spec.priors.beta == BetaPriorKind::Horseshoe) {
    p.horseshoe = HorseshoeState(spec.shrink_mask(), spec.priors.intercept_variance);
    p.beta = sample_horseshoe_prior(p.horseshoe, rng);
  } else {
    const Vec v = spec.normal_prior_variance();
    p.beta.resize(v.size());
    for (int i = 0; i < v.size(); ++i) p.beta[i] = std::sqrt(v[i]) * std_normal(rng);
  }
  p.chol = corr_to_cholesky(sample_corr_marg_uniform(d, spec.corr_nu(), rng));
  if (spec.priors.sigma_alpha == SigmaAlphaPriorKind::InverseWishart) {
    p.sigma_alpha = sample_inverse_wishart(spec.iw_df(), spec.iw_scale(), rng);
  } else {
    HiwPrior hiw(spec.priors.hiw_df, spec.hiw_scales());
    p.sigma_alpha = sample_hiw_prior(hiw, rng);
    p.hiw_aux = hiw.aux;
  }
  const Mat la = Eigen::LLT<Mat>(p.sigma_alpha).matrixL();
  p.alpha.resize(d, n_individuals);
  for (int i = 0; i < n_individuals; ++i) p.alpha.col(i) = la * std_normal_vec(d, rng);
  return p;
}

GewekeFunctions geweke_functions(const ModelSpec& spec, const Vec& beta, const Mat& corr,
                                 const Mat& sigma_alpha, const Mat& alpha,
                                 const HorseshoeState* horseshoe, const Vec* hiw_aux) {
  GewekeFunctions f;
  auto add = [&](const std::string& name, double g) {
    f.names.push_back(name);
    f.values.push_back(g);
    f.names.push_back(name + "^2");
    f.values.push_back(g * g);
  };
  const int d = spec.n_outcomes;
  const int k = spec.coef_per_outcome();
  for (int i = 0; i < beta.size(); ++i)
    add("atan(beta_" + std::to_string(i / k + 1) + "_" + std::to_string(i % k + 1) + ")",
        std::atan(beta[i]));
  for (int i = 1; i < d; ++i)
    for (int j = 0; j < i; ++j)
      add("atan(r_" + std::to_string(i + 1) + "_" + std::to_string(j + 1) + ")", std::atan(corr(i, j)));
  for (int i = 0; i < d; ++i) {
    add("atan(log sigma2_alpha_" + std::to_string(i + 1) + ")", bounded_log(sigma_alpha(i, i)));
    for (int j = 0; j < i; ++j)
      add("atan(sigma_alpha_" + std::to_string(i + 1) + "_" + std::to_string(j + 1) + ")",
          std::atan(sigma_alpha(i, j)));
  }
  for (int i = 0; i < alpha.cols(); ++i)
    for (int e = 0; e < d; ++e)
      add("atan(alpha_" + std::to_string(i + 1) + "_" + std::to_string(e + 1) + ")",
          std::atan(alpha(e, i)));
  if (horseshoe) add("atan(log tau)", bounded_log(horseshoe->global));
  if (hiw_aux)
    for (int i = 0; i < hiw_aux->size(); ++i)
      add("atan(log a_" + std::to_string(i + 1) + ")", bounded_log((*hiw_aux)[i]));
  return f;
}

namespace {

struct Accumulator {
  std::vector<std::vector<double>> series;
  std::vector<std::string> names;

  void push(const GewekeFunctions& f) {
    if (series.empty()) {
      series.resize(f.values.size());
      names = f.names;
    }
    for (std::size_t i = 0; i < f.values.size(); ++i) series[i].push_back(f.values[i]);
  }
};

void moment(const std::vector<double>& s, double& mean, double& se) {
  const double n = static_cast<double>(s.size());
  mean = 0.0;
  for (double v : s) mean += v;
  mean /= n;
  double var = 0.0;
  for (double v : s) var += (v - mean) * (v - mean);
  var /= (n - 1.0);
  se = std::sqrt(var / n);
}

// Fresh latents and outcomes from the current parameters.
void resimulate_data(GibbsSampler& g, const Mat& l_corr) {
  ParamState& s = g.state();
  PanelData& data = g.data();
  const Mat b = s.beta_matrix(g.spec().coef_per_outcome());
  Rng& rng = g.rng();
  const int d = data.n_outcomes;
  for (int i = 0; i < data.n_individuals; ++i)
    for (int t = 0; t < data.n_periods; ++t) {
      const int r = data.row(i, t);
      s.ystar.col(r) = s.alpha.col(i) + b * data.x.row(r).transpose() + l_corr * std_normal_vec(d, rng);
    }
  g.sync_outcomes_from_latents();
}

}  // namespace

GewekeResult geweke_joint_test(const GewekeConfig& cfg) {
  cfg.validate();
  const ModelSpec& spec = cfg.spec;
  const bool hs = spec.priors.beta == BetaPriorKind::Horseshoe;
  const bool hiw = spec.priors.sigma_alpha == SigmaAlphaPriorKind::Hierarchical;

  // Fixed design.
  Rng design_rng = make_rng(cfg.seed, kDesignStream);
  PanelData data;
  data.n_outcomes = spec.n_outcomes;
  data.n_individuals = cfg.n_individuals;
  data.n_periods = cfg.n_periods;
  data.x = CovariateGenerator::gaussian(spec.n_covariates).draw(data.n_obs(), design_rng);
  data.y.assign(static_cast<std::size_t>(data.n_obs()) * data.n_outcomes, 0);
  for (int k = 0; k < spec.n_covariates; ++k)
    data.covariate_labels.push_back(k == 0 ? "intercept" : "x" + std::to_string(k));
  for (int e = 0; e < spec.n_outcomes; ++e) data.outcome_labels.push_back("y" + std::to_string(e + 1));

  // (a) marginal-conditional.
  Accumulator prior_acc;
  Rng prior_rng = make_rng(cfg.seed, kPriorStream);
  for (int m = 0; m < cfg.prior_draws; ++m) {
    const PriorDraw p = draw_from_prior(spec, cfg.n_individuals, prior_rng);
    const Mat corr = cholesky_to_corr(p.chol).values();
    prior_acc.push(geweke_functions(spec, p.beta, corr, p.sigma_alpha, p.alpha,
                                    hs ? &p.horseshoe : nullptr, hiw ? &p.hiw_aux : nullptr));
  }

  // (b) successive-conditional. A pilot run tunes the NUTS step size; then
  // many short chains, each started from an exact joint draw, are run with
  // the step size frozen. Chain averages are independent and unbiased, so
  // their spread gives the standard error even when excursions are long.
  SamplerConfig sc;
  sc.burn_in = cfg.burn_in;
  sc.iterations = cfg.burn_in + 1;
  sc.beta_mode = cfg.beta_mode;
  sc.alpha_mode = cfg.alpha_mode;
  sc.switch_on = 0;
  sc.seed = cfg.seed;
  sc.store_alpha = false;
  sc.fault_alpha_variance_scale = cfg.fault_alpha_variance_scale;
  sc.adapt_step_size = cfg.burn_in > 0;

  auto start_from_prior = [&](GibbsSampler& g, Rng& rng) {
    const PriorDraw p = draw_from_prior(spec, cfg.n_individuals, rng);
    ParamState& s = g.state();
    s.beta = p.beta;
    s.set_corr(p.chol);
    s.sigma_alpha = p.sigma_alpha;
    s.alpha = p.alpha;
    if (hs) {
      s.horseshoe = p.horseshoe;
      s.beta_prior_variance = horseshoe_variances(s.horseshoe);
    }
    if (hiw) s.hiw.aux = p.hiw_aux;
  };

  GewekeResult result;
  HmcConfig tuned = sc.hmc;
  if (cfg.burn_in > 0) {
    GibbsSampler pilot(data, spec, sc);
    Rng init_rng = make_rng(cfg.seed, kPilotStream);
    start_from_prior(pilot, init_rng);
    for (int iter = 0; iter < cfg.burn_in; ++iter) {
      resimulate_data(pilot, Mat(Eigen::LLT<Mat>(pilot.state().corr).matrixL()));
      pilot.sweep(iter);
    }
    tuned = pilot.config().hmc;
    if (tuned.counter > 0) finish_adaptation(tuned);
  }
  sc.adapt_step_size = false;
  sc.burn_in = 0;
  sc.iterations = cfg.sweeps / cfg.chains;
  sc.hmc = tuned;

  std::vector<std::vector<double>> chain_means;  // [function][chain]
  std::vector<std::string> chain_names;
  for (int c = 0; c < cfg.chains; ++c) {
    GibbsSampler g(data, spec, sc);
    g.rng() = make_rng(cfg.seed, kChainStream + static_cast<std::uint64_t>(c));
    start_from_prior(g, g.rng());
    std::vector<double> sums;
    for (int iter = 0; iter < sc.iterations; ++iter) {
      resimulate_data(g, Mat(Eigen::LLT<Mat>(g.state().corr).matrixL()));
      g.sweep(iter);
      if (g.last_nuts().divergent) ++result.divergences;
      const ParamState& s = g.state();
      const GewekeFunctions f = geweke_functions(spec, s.beta, s.corr, s.sigma_alpha, s.alpha,
                                                 hs ? &s.horseshoe : nullptr, hiw ? &s.hiw.aux : nullptr);
      if (sums.empty()) {
        sums.assign(f.values.size(), 0.0);
        if (chain_names.empty()) {
          chain_names = f.names;
          chain_means.resize(f.values.size());
        }
      }
      for (std::size_t i = 0; i < f.values.size(); ++i) sums[i] += f.values[i];
    }
    for (std::size_t i = 0; i < sums.size(); ++i)
      chain_means[i].push_back(sums[i] / sc.iterations);
  }

  for (std::size_t i = 0; i < prior_acc.series.size(); ++i) {
    GewekeMoment m;
    m.name = prior_acc.names[i];
    moment(prior_acc.series[i], m.prior_mean, m.prior_se);
    moment(chain_means[i], m.chain_mean, m.chain_se);
    const double se = std::hypot(m.prior_se, m.chain_se);
    m.z = (m.chain_mean - m.prior_mean) / se;
    if (!std::isfinite(m.prior_mean) || !std::isfinite(m.chain_mean) || !std::isfinite(m.z))
      throw std::runtime_error("non-finite moment for " + m.name);
    if (std::abs(m.z) > result.max_abs_z) {
      result.max_abs_z = std::abs(m.z);
      result.worst = m.name;
    }
    result.moments.push_back(m);
  }
  return result;
}

std::string geweke_table(const GewekeResult& r) {
  std::size_t w = 12;
  for (const auto& m : r.moments) w = std::max(w, m.name.size() + 2);
  std::ostringstream os;
  os << std::left << std::setw(static_cast<int>(w)) << "function" << std::right << std::setw(12)
     << "prior" << std::setw(12) << "se" << std::setw(12) << "chain" << std::setw(12) << "se"
     << std::setw(9) << "z" << "\n"
     << std::fixed;
  for (const auto& m : r.moments)
    os << std::left << std::setw(static_cast<int>(w)) << m.name << std::right << std::setprecision(5)
       << std::setw(12) << m.prior_mean << std::setw(12) << m.prior_se << std::setw(12)
       << m.chain_mean << std::setw(12) << m.chain_se << std::setprecision(2) << std::setw(9) << m.z
       << "\n";
  os << "max |z| = " << std::setprecision(3) << r.max_abs_z << " (" << r.worst << ")\n";
  return os.str();
}

std::string geweke_csv(const GewekeResult& r) {
  std::ostringstream os;
  os << std::setprecision(17) << "function,prior_mean,prior_se,chain_mean,chain_se,z\n";
  for (const auto& m : r.moments)
    os << '"' << m.name << "\"," << m.prior_mean << ',' << m.prior_se << ',' << m.chain_mean << ','
       << m.chain_se << ',' << m.z << '\n';
  return os.str();
}

}  // namespace mvp
