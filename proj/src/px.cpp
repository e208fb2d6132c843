// Parameter-expanded comparison sampler. The latent scale is expanded by
// D = diag(delta), the covariance Sigma_eps = D R D and gamma = D B are
// drawn conjugately, and everything is mapped back to the identified scale.
// The random effects are carried along without rescaling, which is what
// makes this scheme drift away from the correct posterior.

#include "mvp/gibbs.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>
#include <string>

namespace mvp {

namespace {

class PxSampler {
 public:
  PxSampler(GibbsSampler& base, double coef_variance) : g_(base), psi_(coef_variance) {
    const PanelData& data = g_.data();
    const int k = data.n_covariates();
    vn_ = spd_inverse(data.x.transpose() * data.x + Mat::Identity(k, k) / psi_, "PX posterior");
    vn_chol_ = Eigen::LLT<Mat>(vn_).matrixL();
  }

  void sweep() {
    g_.update_latents();
    g_.update_alpha(proposal::Independent{});
    g_.update_sigma_alpha();
    expand_and_redraw();
    ++sweeps_;
  }

 private:
  void expand_and_redraw() {
    ParamState& s = g_.state();
    const PanelData& data = g_.data();
    const int d = data.n_outcomes;
    const int k = data.n_covariates();
    const int n = data.n_obs();
    Rng& rng = g_.rng();

    Vec delta(d);
    for (int i = 0; i < d; ++i)
      delta[i] = std::sqrt(inv_gamma_draw(0.5 * (d + 1), 0.5 * s.corr_inv(i, i), rng));

    // z~ = D (y* - alpha), one row per observation.
    Mat zt(n, d);
    for (int i = 0; i < data.n_individuals; ++i)
      for (int t = 0; t < data.n_periods; ++t) {
        const int r = data.row(i, t);
        zt.row(r) = (delta.asDiagonal() * (s.ystar.col(r) - s.alpha.col(i))).transpose();
      }
    const Mat mn = vn_ * (data.x.transpose() * zt);  // K x D
    // Residual form of the conjugate scale; positive definite by construction.
    const Mat resid = zt - data.x * mn;
    Mat scale = Mat::Identity(d, d) + resid.transpose() * resid + mn.transpose() * mn / psi_;
    scale = 0.5 * (scale + scale.transpose());
    // With many coefficients the matrix-normal prior on B carries a |R|^{-K/2}
    // factor that can pull R towards singularity; once delta overflows the
    // scale stops being numerically positive definite.
    if (!scale.allFinite() || Eigen::LLT<Mat>(scale).info() != Eigen::Success)
      throw std::runtime_error("PX chain degenerated at sweep " + std::to_string(sweeps_) +
                               ": correlation matrix became numerically singular");
    const Mat sigma_eps = sample_inverse_wishart(d + 1.0 + n, scale, rng);
    const Mat l_sigma = Eigen::LLT<Mat>(sigma_eps).matrixL();
    Mat noise(k, d);
    for (int a = 0; a < k; ++a)
      for (int b = 0; b < d; ++b) noise(a, b) = std_normal(rng);
    const Mat gamma_t = mn + vn_chol_ * noise * l_sigma.transpose();  // K x D

    const Vec dstar = sigma_eps.diagonal().cwiseSqrt().cwiseInverse();
    const Mat b = dstar.asDiagonal() * gamma_t.transpose();  // D x K
    Mat r = dstar.asDiagonal() * sigma_eps * dstar.asDiagonal();
    r.diagonal().setOnes();
    r = 0.5 * (r + r.transpose());
    r.diagonal().setOnes();
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < k; ++j) s.beta[i * k + j] = b(i, j);
    s.set_corr(corr_to_cholesky(CorrelationMatrix(r)));
    // Keep the exact unit diagonal rather than the round trip through L.
    s.corr = r;
    s.corr_inv = spd_inverse(r, "PX correlation");
    // y* = D* z* with z* = D y*.
    for (int c = 0; c < n; ++c)
      s.ystar.col(c) = dstar.cwiseProduct(delta).asDiagonal() * s.ystar.col(c);
  }

  GibbsSampler& g_;
  double psi_;
  Mat vn_;
  Mat vn_chol_;
  int sweeps_ = 0;
};

}  // namespace

ChainDraws run_px_chain(const PanelData& data, const ModelSpec& spec, const SamplerConfig& cfg) {
  ModelSpec px_spec = spec;
  px_spec.priors.sigma_alpha = SigmaAlphaPriorKind::Hierarchical;
  px_spec.priors.beta = BetaPriorKind::Normal;
  SamplerConfig px_cfg = cfg;
  px_cfg.adapt_step_size = false;
  GibbsSampler sampler(data, px_spec, px_cfg);
  PxSampler px(sampler, px_spec.priors.beta_variance);
  ChainDraws draws = sampler.empty_draws();
  draws.method = "px";
  const auto start = std::chrono::steady_clock::now();
  for (int iter = 0; iter < cfg.iterations; ++iter) {
    px.sweep();
    if (iter >= cfg.burn_in && (iter - cfg.burn_in) % cfg.thin == 0) sampler.record(draws);
  }
  draws.seconds_total =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  draws.iterations_run = cfg.iterations;
  return draws;
}

}  // namespace mvp
