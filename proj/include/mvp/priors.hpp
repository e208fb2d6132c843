#pragma once

#include "mvp/corr_repar.hpp"
#include "mvp/random.hpp"

#include <utility>
#include <vector>

namespace mvp {

/// Sigma ~ IW(df, scale), density proportional to
/// |Sigma|^{-(df+D+1)/2} exp(-tr(scale Sigma^{-1}) / 2). Bartlett
/// decomposition; requires df > D - 1.
Mat sample_inverse_wishart(double df, const Mat& scale, Rng& rng);

/// Draws R from the marginally uniform family by normalising IW(nu, I).
CorrelationMatrix sample_corr_marg_uniform(int dim, double nu, Rng& rng);

/// Hierarchical inverse-Wishart prior HIW(df, A) on a covariance matrix,
/// with its auxiliary Gibbs state a (one per dimension).
struct HiwPrior {
  double df = 2.0;
  Vec scales;  // A_i
  Vec aux;     // a_i

  HiwPrior() = default;
  HiwPrior(double df, Vec scales);
  void validate() const;
};

/// Global-local horseshoe state. Local scales are kept for every
/// coefficient; masked-out (intercept) entries are never updated.
struct HorseshoeState {
  Vec local;           // lambda_i
  double global = 1.0; // tau
  Vec local_aux;       // nu_i
  double global_aux = 1.0;  // xi
  std::vector<bool> shrink_mask;
  double intercept_variance = 100.0;

  HorseshoeState() = default;
  HorseshoeState(std::vector<bool> mask, double intercept_variance = 100.0);
  int shrunk_count() const;
  void validate() const;
};

/// Mean and covariance of a Gaussian prior on the coefficients.
struct NormalPrior {
  Vec mean;
  Mat covariance;

  static NormalPrior isotropic(int n, double variance);
  void validate() const;
};

/// Sigma_alpha ~ IW(df + P, sum alpha_i alpha_i' + scale). Columns of
/// `alpha` are the P random-effect vectors.
Mat iw_update_sigma_alpha(const Mat& alpha, double df, const Mat& scale, Rng& rng);

/// Blocked HIW update: a | Sigma_alpha, then Sigma_alpha | a. Updates
/// prior.aux in place and returns the new Sigma_alpha.
Mat hiw_update_sigma_alpha(const Mat& alpha, const Mat& sigma_alpha, HiwPrior& prior, Rng& rng);

/// Draws (a, Sigma) from the HIW prior itself.
Mat sample_hiw_prior(HiwPrior& prior, Rng& rng);

/// One sweep of the auxiliary-variable horseshoe sampler given beta.
/// Returns the prior variance diagonal: tau^2 lambda_i^2 for shrunk
/// coefficients, intercept_variance for the rest.
Vec horseshoe_update(const Vec& beta, HorseshoeState& state, Rng& rng);

/// Prior variance diagonal implied by the current horseshoe state.
Vec horseshoe_variances(const HorseshoeState& state);

/// Draws the horseshoe state and coefficients from the prior.
Vec sample_horseshoe_prior(HorseshoeState& state, Rng& rng);

}  // namespace mvp
