#include "mvp/gibbs.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>
#include <utility>

namespace mvp {

double ModelSpec::iw_df() const { return priors.iw_df.value_or(n_outcomes + 1.0); }
Mat ModelSpec::iw_scale() const {
  return priors.iw_scale.value_or(Mat::Identity(n_outcomes, n_outcomes));
}
Vec ModelSpec::hiw_scales() const { return priors.hiw_scales.value_or(Vec::Ones(n_outcomes)); }
double ModelSpec::corr_nu() const { return priors.corr_nu.value_or(n_outcomes + 1.0); }

Vec ModelSpec::normal_prior_variance() const {
  const int kt = coef_per_outcome();
  Vec v(n_beta());
  const double vz = priors.individual_variance.value_or(priors.beta_variance);
  for (int d = 0; d < n_outcomes; ++d)
    for (int k = 0; k < kt; ++k) v[d * kt + k] = k < n_covariates ? priors.beta_variance : vz;
  return v;
}

std::vector<bool> ModelSpec::shrink_mask() const {
  std::vector<bool> mask(n_beta(), true);
  for (int d = 0; d < n_outcomes; ++d) mask[d * coef_per_outcome()] = false;
  return mask;
}

void ModelSpec::validate() const {
  if (n_outcomes < 1) throw std::invalid_argument("model needs at least one outcome");
  if (n_covariates < 1) throw std::invalid_argument("model needs at least the constant covariate");
  if (n_individual < 0) throw std::invalid_argument("individual covariate count must be >= 0");
  if (!(priors.beta_variance > 0)) throw std::invalid_argument("beta prior variance must be positive");
  if (priors.individual_variance && !(*priors.individual_variance > 0))
    throw std::invalid_argument("individual-covariate prior variance must be positive");
  if (!(priors.intercept_variance > 0)) throw std::invalid_argument("intercept variance must be positive");
  const int d = n_outcomes;
  if (!(iw_df() > d - 1)) throw std::invalid_argument("inverse-Wishart df must exceed D - 1");
  const Mat s = iw_scale();
  if (s.rows() != d || s.cols() != d) throw std::invalid_argument("inverse-Wishart scale must be D x D");
  CovarianceMatrix check(s);
  if (!(priors.hiw_df > 0)) throw std::invalid_argument("HIW df must be positive");
  const Vec a = hiw_scales();
  if (a.size() != d || (a.array() <= 0).any())
    throw std::invalid_argument("HIW scales must be D positive numbers");
  if (!(corr_nu() > d - 1)) throw std::invalid_argument("correlation prior nu must exceed D - 1");
}

ModelSpec ModelSpec::for_data(const PanelData& data, bool use_individual, PriorSpec priors) {
  ModelSpec s;
  s.n_outcomes = data.n_outcomes;
  s.n_covariates = data.n_covariates();
  s.n_individual = use_individual ? static_cast<int>(data.z.cols()) : 0;
  s.priors = std::move(priors);
  return s;
}

int SamplerConfig::kept_draws() const {
  return iterations > burn_in ? (iterations - burn_in + thin - 1) / thin : 0;
}

void SamplerConfig::validate() const {
  if (iterations < 1) throw std::invalid_argument("iterations must be >= 1");
  if (burn_in < 0) throw std::invalid_argument("burn-in must be >= 0");
  if (burn_in >= iterations) throw std::invalid_argument("burn-in must be smaller than iterations");
  if (thin < 1) throw std::invalid_argument("thinning must be >= 1");
  if (switch_on && *switch_on < 0) throw std::invalid_argument("switch-on iteration must be >= 0");
  mvp::validate(beta_mode);
  mvp::validate(alpha_mode);
  if (!(fault_alpha_variance_scale > 0)) throw std::invalid_argument("fault scale must be positive");
  if (store_ystar < 0) throw std::invalid_argument("store_ystar must be >= 0");
  hmc.validate();
}

Mat ParamState::beta_matrix(int coef_per_outcome) const {
  const int d = static_cast<int>(beta.size()) / coef_per_outcome;
  return Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
      beta.data(), d, coef_per_outcome);
}

void ParamState::set_corr(const UnitCholesky& l) {
  chol = l;
  corr = cholesky_to_corr(l).values();
  corr_inv = spd_inverse(corr, "error correlation matrix");
}

std::string block_name(Block b) {
  switch (b) {
    case Block::YStar: return "ystar";
    case Block::Alpha: return "alpha";
    case Block::Beta: return "beta";
    case Block::CholL: return "vechL_L";
    case Block::CorrR: return "vechL_R";
    case Block::DiagSigmaAlpha: return "diag_sigma_alpha";
    case Block::CorrAlpha: return "vechL_R_alpha";
    case Block::SigmaAlpha: return "sigma_alpha";
  }
  return "";
}

std::optional<Block> parse_block(const std::string& name) {
  for (Block b : {Block::YStar, Block::Alpha, Block::Beta, Block::CholL, Block::CorrR,
                  Block::DiagSigmaAlpha, Block::CorrAlpha, Block::SigmaAlpha})
    if (block_name(b) == name) return b;
  return std::nullopt;
}

const std::vector<Vec>& ChainDraws::block(Block b) const {
  switch (b) {
    case Block::YStar: return ystar;
    case Block::Alpha: return alpha;
    case Block::Beta: return beta;
    case Block::CholL: return chol_l;
    case Block::CorrR: return corr_r;
    case Block::DiagSigmaAlpha: return diag_sigma_alpha;
    case Block::CorrAlpha: return corr_alpha;
    case Block::SigmaAlpha: return sigma_alpha;
  }
  throw std::logic_error("unknown block");
}

std::vector<Vec>& ChainDraws::block(Block b) {
  return const_cast<std::vector<Vec>&>(std::as_const(*this).block(b));
}

Mat ChainDraws::matrix(Block b) const {
  const auto& rows = block(b);
  if (rows.empty()) return Mat();
  Mat m(static_cast<int>(rows.size()), rows.front().size());
  for (std::size_t r = 0; r < rows.size(); ++r) m.row(static_cast<int>(r)) = rows[r].transpose();
  return m;
}

std::vector<double> ChainDraws::series(Block b, int index) const {
  const auto& rows = block(b);
  std::vector<double> s;
  s.reserve(rows.size());
  for (const auto& r : rows) {
    if (index < 0 || index >= r.size()) throw std::out_of_range("parameter index out of range");
    s.push_back(r[index]);
  }
  return s;
}

std::vector<std::string> ChainDraws::column_names(Block b) const {
  const int d = n_outcomes;
  std::vector<std::string> names;
  auto pair = [](const std::string& p, int i, int j) {
    return p + "_" + std::to_string(i + 1) + "_" + std::to_string(j + 1);
  };
  switch (b) {
    case Block::Beta:
      for (int e = 0; e < d; ++e)
        for (int k = 0; k < coef_per_outcome; ++k)
          names.push_back(k < static_cast<int>(beta_names.size())
                              ? "beta_" + std::to_string(e + 1) + "_" + beta_names[k]
                              : pair("beta", e, k));
      break;
    case Block::CholL:
    case Block::CorrR:
    case Block::CorrAlpha: {
      const std::string p = b == Block::CholL ? "L" : b == Block::CorrR ? "r" : "r_alpha";
      for (int i = 1; i < d; ++i)
        for (int j = 0; j < i; ++j) names.push_back(pair(p, i, j));
      break;
    }
    case Block::DiagSigmaAlpha:
      for (int i = 0; i < d; ++i) names.push_back("sigma2_alpha_" + std::to_string(i + 1));
      break;
    case Block::SigmaAlpha:
      for (int i = 0; i < d; ++i)
        for (int j = 0; j <= i; ++j) names.push_back(pair("sigma_alpha", i, j));
      break;
    case Block::Alpha:
      for (int i = 0; i < n_individuals; ++i)
        for (int e = 0; e < d; ++e) names.push_back(pair("alpha", i, e));
      break;
    case Block::YStar: {
      const int n = ystar.empty() ? 0 : static_cast<int>(ystar.front().size());
      for (int c = 0; c < n; ++c) names.push_back(pair("ystar", c / d, c % d));
      break;
    }
  }
  return names;
}

PanelData prepare_data(const PanelData& data, const ModelSpec& spec) {
  data.validate();
  if (spec.n_individual > 0) {
    if (data.z.cols() != spec.n_individual)
      throw std::invalid_argument("model expects " + std::to_string(spec.n_individual) +
                                  " individual covariates, data has " + std::to_string(data.z.cols()));
    return augment_individual_covariates(data);
  }
  PanelData out = data;
  out.z.resize(0, 0);
  out.individual_labels.clear();
  return out;
}

GibbsSampler::GibbsSampler(const PanelData& data, ModelSpec spec, SamplerConfig cfg)
    : data_(prepare_data(data, spec)), spec_(std::move(spec)), cfg_(std::move(cfg)),
      rng_(make_rng(cfg_.seed, 0)) {
  spec_.validate();
  cfg_.validate();
  const int d = spec_.n_outcomes;
  if (data_.n_outcomes != d) throw std::invalid_argument("data and model disagree on D");
  if (data_.n_covariates() != spec_.coef_per_outcome())
    throw std::invalid_argument("data and model disagree on the number of covariates");
  xtx_ = data_.x.transpose() * data_.x;

  state_.beta = Vec::Zero(spec_.n_beta());
  state_.alpha = Mat::Zero(d, data_.n_individuals);
  state_.set_corr(UnitCholesky(d));
  state_.sigma_alpha = Mat::Identity(d, d);
  state_.horseshoe = HorseshoeState(spec_.shrink_mask(), spec_.priors.intercept_variance);
  state_.hiw = HiwPrior(spec_.priors.hiw_df, spec_.hiw_scales());
  state_.beta_prior_variance = spec_.priors.beta == BetaPriorKind::Horseshoe
                                   ? horseshoe_variances(state_.horseshoe)
                                   : spec_.normal_prior_variance();
  reset_latents_to_signs();
}

void GibbsSampler::reset_latents_to_signs() {
  const int d = spec_.n_outcomes;
  state_.ystar.resize(d, data_.n_obs());
  for (int r = 0; r < data_.n_obs(); ++r)
    for (int e = 0; e < d; ++e) {
      const bool one = data_.y[static_cast<std::size_t>(r) * d + e] == 1;
      state_.ystar(e, r) = one ? sample_truncated_normal(0, 1, 0, kInf, rng_)
                               : sample_truncated_normal(0, 1, -kInf, 0, rng_);
    }
}

void GibbsSampler::sync_outcomes_from_latents() {
  const int d = spec_.n_outcomes;
  for (int r = 0; r < data_.n_obs(); ++r)
    for (int e = 0; e < d; ++e)
      data_.y[static_cast<std::size_t>(r) * d + e] = state_.ystar(e, r) > 0 ? 1 : 0;
}

void GibbsSampler::update_latents() {
  const int d = spec_.n_outcomes;
  const Mat b = state_.beta_matrix(spec_.coef_per_outcome());
  const Mat& q = state_.corr_inv;
  for (int i = 0; i < data_.n_individuals; ++i)
    for (int t = 0; t < data_.n_periods; ++t) {
      const int r = data_.row(i, t);
      const Vec mu = state_.alpha.col(i) + b * data_.x.row(r).transpose();
      Vec ys = state_.ystar.col(r);
      for (int e = 0; e < d; ++e) {
        const ConditionalNormal c = conditional_from_precision(q, mu, ys, e);
        const bool one = data_.y[static_cast<std::size_t>(r) * d + e] == 1;
        ys[e] = one ? sample_truncated_normal(c.mean, c.sd, 0.0, kInf, rng_)
                    : sample_truncated_normal(c.mean, c.sd, -kInf, 0.0, rng_);
      }
      state_.ystar.col(r) = ys;
    }
}

void GibbsSampler::update_horseshoe() {
  if (spec_.priors.beta != BetaPriorKind::Horseshoe) return;
  state_.beta_prior_variance = horseshoe_update(state_.beta, state_.horseshoe, rng_);
}

void GibbsSampler::beta_conditional(Vec& mean, Mat& precision) const {
  const int d = spec_.n_outcomes;
  const int k = spec_.coef_per_outcome();
  const Mat& q = state_.corr_inv;
  precision.resize(d * k, d * k);
  for (int a = 0; a < d; ++a)
    for (int c = 0; c < d; ++c) precision.block(a * k, c * k, k, k) = q(a, c) * xtx_;
  precision.diagonal() += state_.beta_prior_variance.cwiseInverse();

  // E = y* - alpha (per observation), rhs = Q E X as a D x K matrix.
  Mat e = state_.ystar;
  for (int i = 0; i < data_.n_individuals; ++i)
    for (int t = 0; t < data_.n_periods; ++t) e.col(data_.row(i, t)) -= state_.alpha.col(i);
  const Mat rhs = q * (e * data_.x);
  Vec rhs_vec(d * k);
  for (int a = 0; a < d; ++a) rhs_vec.segment(a * k, k) = rhs.row(a).transpose();
  Eigen::LLT<Mat> llt(precision);
  if (llt.info() != Eigen::Success)
    throw std::runtime_error("beta conditional precision is not positive definite");
  mean = llt.solve(rhs_vec);
}

void GibbsSampler::update_beta(const ProposalMode& mode) {
  Vec mean;
  Mat precision;
  beta_conditional(mean, precision);
  Eigen::LLT<Mat> llt(precision);
  state_.beta = gaussian_block_move(state_.beta, mean, llt, mode, rng_);
}

ResidualScatter GibbsSampler::corr_residuals() const {
  const Mat b = state_.beta_matrix(spec_.coef_per_outcome());
  Mat e = state_.ystar - b * data_.x.transpose();
  for (int i = 0; i < data_.n_individuals; ++i)
    for (int t = 0; t < data_.n_periods; ++t) e.col(data_.row(i, t)) -= state_.alpha.col(i);
  return ResidualScatter::from_residuals(e);
}

NutsTransition GibbsSampler::update_corr(bool adapting) {
  const int d = spec_.n_outcomes;
  if (d == 1) return last_nuts_ = NutsTransition{Vec(), 0.0, 1.0, 0, 0, false};
  const ResidualScatter scatter = corr_residuals();
  const double nu = spec_.corr_nu();
  const LogDensityFn target = [&](const Vec& theta, Vec& grad) {
    if (!theta.allFinite()) throw std::domain_error("non-finite Cholesky entry");
    return log_target_and_grad(UnitCholesky(d, theta), scatter, nu, grad);
  };
  if (!cfg_.hmc.step_size_initialised) init_step_size(target, state_.chol.entries(), cfg_.hmc, rng_);
  last_nuts_ = nuts_sample(target, state_.chol.entries(), cfg_.hmc, adapting, rng_);
  state_.set_corr(UnitCholesky(d, last_nuts_.theta));
  return last_nuts_;
}

void GibbsSampler::alpha_conditional(Mat& means, Mat& covariance) const {
  const Mat& q = state_.corr_inv;
  const Mat precision =
      data_.n_periods * q + spd_inverse(state_.sigma_alpha, "Sigma_alpha");
  covariance = spd_inverse(precision, "alpha conditional precision");
  const Mat b = state_.beta_matrix(spec_.coef_per_outcome());
  const Mat resid = state_.ystar - b * data_.x.transpose();
  Mat sums = Mat::Zero(spec_.n_outcomes, data_.n_individuals);
  for (int i = 0; i < data_.n_individuals; ++i)
    for (int t = 0; t < data_.n_periods; ++t) sums.col(i) += resid.col(data_.row(i, t));
  means = covariance * (q * sums);
}

void GibbsSampler::update_alpha(const ProposalMode& mode) {
  const Mat& q = state_.corr_inv;
  const Mat precision = data_.n_periods * q + spd_inverse(state_.sigma_alpha, "Sigma_alpha");
  Eigen::LLT<Mat> llt(precision);
  if (llt.info() != Eigen::Success)
    throw std::runtime_error("alpha conditional precision is not positive definite");
  const Mat b = state_.beta_matrix(spec_.coef_per_outcome());
  const Mat resid = state_.ystar - b * data_.x.transpose();
  Mat sums = Mat::Zero(spec_.n_outcomes, data_.n_individuals);
  for (int i = 0; i < data_.n_individuals; ++i)
    for (int t = 0; t < data_.n_periods; ++t) sums.col(i) += resid.col(data_.row(i, t));
  const Mat means = llt.solve(q * sums);

  const bool faulty = cfg_.fault_alpha_variance_scale != 1.0 &&
                      std::holds_alternative<proposal::Independent>(mode);
  for (int i = 0; i < data_.n_individuals; ++i) {
    if (faulty) {
      Vec z = std_normal_vec(spec_.n_outcomes, rng_);
      llt.matrixU().solveInPlace(z);
      state_.alpha.col(i) = means.col(i) + std::sqrt(cfg_.fault_alpha_variance_scale) * z;
    } else {
      state_.alpha.col(i) = gaussian_block_move(state_.alpha.col(i), means.col(i), llt, mode, rng_);
    }
  }
}

void GibbsSampler::update_sigma_alpha() {
  if (spec_.priors.sigma_alpha == SigmaAlphaPriorKind::InverseWishart)
    state_.sigma_alpha = iw_update_sigma_alpha(state_.alpha, spec_.iw_df(), spec_.iw_scale(), rng_);
  else
    state_.sigma_alpha = hiw_update_sigma_alpha(state_.alpha, state_.sigma_alpha, state_.hiw, rng_);
}

void GibbsSampler::sweep(int iteration) {
  const bool adapting = cfg_.adapt_step_size && iteration < cfg_.burn_in;
  if (!adapting && cfg_.adapt_step_size && !adaptation_finished_ && cfg_.hmc.counter > 0) {
    finish_adaptation(cfg_.hmc);
    adaptation_finished_ = true;
  }
  const bool independent_phase = iteration < cfg_.switch_on_iteration();
  const ProposalMode beta_mode = independent_phase ? ProposalMode{proposal::Independent{}} : cfg_.beta_mode;
  const ProposalMode alpha_mode =
      independent_phase ? ProposalMode{proposal::Independent{}} : cfg_.alpha_mode;
  update_latents();
  update_horseshoe();
  update_beta(beta_mode);
  update_corr(adapting);
  update_alpha(alpha_mode);
  update_sigma_alpha();
}

ChainDraws GibbsSampler::empty_draws() const {
  ChainDraws d;
  d.n_outcomes = spec_.n_outcomes;
  d.coef_per_outcome = spec_.coef_per_outcome();
  d.n_individuals = data_.n_individuals;
  d.seed = cfg_.seed;
  d.beta_names = data_.covariate_labels;
  return d;
}

void GibbsSampler::record(ChainDraws& draws) const {
  const ParamState& s = state_;
  draws.beta.push_back(s.beta);
  draws.chol_l.push_back(s.chol.entries());
  draws.corr_r.push_back(vechl(s.corr));
  draws.diag_sigma_alpha.push_back(s.sigma_alpha.diagonal());
  const Vec sd_inv = s.sigma_alpha.diagonal().cwiseSqrt().cwiseInverse();
  draws.corr_alpha.push_back(vechl(sd_inv.asDiagonal() * s.sigma_alpha * sd_inv.asDiagonal()));
  draws.sigma_alpha.push_back(vech(s.sigma_alpha));
  if (cfg_.store_alpha)
    draws.alpha.push_back(Eigen::Map<const Vec>(s.alpha.data(), s.alpha.size()));
  if (cfg_.store_ystar > 0) {
    const int n = std::min<int>(cfg_.store_ystar, static_cast<int>(s.ystar.size()));
    draws.ystar.push_back(Eigen::Map<const Vec>(s.ystar.data(), n));
  }
  draws.divergent.push_back(last_nuts_.divergent ? 1 : 0);
  draws.accept_stat.push_back(last_nuts_.accept_stat);
  draws.step_size.push_back(cfg_.hmc.step_size);
  draws.tree_depth.push_back(last_nuts_.depth);
}

ChainDraws run_chain(const PanelData& data, const ModelSpec& spec, const SamplerConfig& cfg) {
  GibbsSampler sampler(data, spec, cfg);
  ChainDraws draws = sampler.empty_draws();
  const auto start = std::chrono::steady_clock::now();
  for (int iter = 0; iter < cfg.iterations; ++iter) {
    sampler.sweep(iter);
    if (sampler.last_nuts().divergent) ++draws.total_divergences;
    if (iter >= cfg.burn_in && (iter - cfg.burn_in) % cfg.thin == 0) sampler.record(draws);
  }
  draws.seconds_total =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  draws.iterations_run = cfg.iterations;
  return draws;
}

}  // namespace mvp
