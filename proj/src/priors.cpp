#include "mvp/priors.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mvp {

namespace {

// Keeps tau^2 lambda^2 usable as a prior variance when the shrinkage
// collapses below double precision.
constexpr double kMinPriorVariance = 1e-12;

}  // namespace

Mat sample_inverse_wishart(double df, const Mat& scale, Rng& rng) {
  const int d = static_cast<int>(scale.rows());
  if (!(df > d - 1))
    throw std::invalid_argument("inverse-Wishart degrees of freedom must exceed D - 1");
  Eigen::LLT<Mat> llt(scale);
  if (llt.info() != Eigen::Success)
    throw std::invalid_argument("inverse-Wishart scale is not positive definite");
  const Mat l_scale = llt.matrixL();

  // Bartlett factor A of a W(df, I) draw: W0 = A A'.
  Mat a = Mat::Zero(d, d);
  for (int i = 0; i < d; ++i) {
    a(i, i) = std::sqrt(std::chi_squared_distribution<double>(df - i)(rng));
    for (int j = 0; j < i; ++j) a(i, j) = std_normal(rng);
  }
  // Sigma = L_scale W0^{-1} L_scale' = (L_scale A^{-T}) (L_scale A^{-T})'.
  const Mat a_inv = a.triangularView<Eigen::Lower>().solve(Mat::Identity(d, d));
  const Mat f = l_scale * a_inv.transpose();
  Mat sigma = f * f.transpose();
  return 0.5 * (sigma + sigma.transpose());
}

CorrelationMatrix sample_corr_marg_uniform(int dim, double nu, Rng& rng) {
  if (dim == 1) return CorrelationMatrix::identity(1);
  const Mat sigma = sample_inverse_wishart(nu, Mat::Identity(dim, dim), rng);
  const Vec s = sigma.diagonal().cwiseSqrt().cwiseInverse();
  Mat r = s.asDiagonal() * sigma * s.asDiagonal();
  for (int i = 0; i < dim; ++i) {
    r(i, i) = 1.0;
    for (int j = 0; j < i; ++j) r(j, i) = r(i, j);
  }
  return CorrelationMatrix(std::move(r));
}

HiwPrior::HiwPrior(double df_, Vec scales_) : df(df_), scales(std::move(scales_)) {
  aux = scales.array().square();
  validate();
}

void HiwPrior::validate() const {
  if (!(df > 0)) throw std::invalid_argument("HIW degrees of freedom must be positive");
  if (scales.size() == 0 || (scales.array() <= 0).any())
    throw std::invalid_argument("HIW scales must be positive");
  if (aux.size() != scales.size() || (aux.array() <= 0).any())
    throw std::invalid_argument("HIW auxiliaries must be positive and match the scales");
}

HorseshoeState::HorseshoeState(std::vector<bool> mask, double intercept_var)
    : local(Vec::Ones(static_cast<int>(mask.size()))),
      local_aux(Vec::Ones(static_cast<int>(mask.size()))),
      shrink_mask(std::move(mask)),
      intercept_variance(intercept_var) {
  validate();
}

int HorseshoeState::shrunk_count() const {
  return static_cast<int>(std::count(shrink_mask.begin(), shrink_mask.end(), true));
}

void HorseshoeState::validate() const {
  const auto n = static_cast<Eigen::Index>(shrink_mask.size());
  if (local.size() != n || local_aux.size() != n)
    throw std::invalid_argument("horseshoe state sizes do not match the mask");
  if ((local.array() <= 0).any() || (local_aux.array() <= 0).any() || !(global > 0) ||
      !(global_aux > 0))
    throw std::invalid_argument("horseshoe scales must be strictly positive");
  if (!(intercept_variance > 0)) throw std::invalid_argument("intercept variance must be positive");
}

NormalPrior NormalPrior::isotropic(int n, double variance) {
  return {Vec::Zero(n), variance * Mat::Identity(n, n)};
}

void NormalPrior::validate() const {
  if (mean.size() != covariance.rows() || covariance.rows() != covariance.cols())
    throw std::invalid_argument("normal prior mean and covariance sizes differ");
  CovarianceMatrix check(covariance);
}

Mat iw_update_sigma_alpha(const Mat& alpha, double df, const Mat& scale, Rng& rng) {
  const int d = static_cast<int>(scale.rows());
  const double post_df = df + static_cast<double>(alpha.cols());
  if (!(post_df > d - 1))
    throw std::invalid_argument("improper inverse-Wishart posterior: df + P <= D - 1");
  const Mat post_scale = alpha * alpha.transpose() + scale;
  return sample_inverse_wishart(post_df, post_scale, rng);
}

Mat hiw_update_sigma_alpha(const Mat& alpha, const Mat& sigma_alpha, HiwPrior& prior, Rng& rng) {
  prior.validate();
  const int d = static_cast<int>(sigma_alpha.rows());
  if (prior.scales.size() != d) throw std::invalid_argument("HIW scale count must equal D");
  const Mat precision = spd_inverse(sigma_alpha, "Sigma_alpha");
  for (int i = 0; i < d; ++i) {
    const double scale = prior.df * precision(i, i) + 1.0 / (prior.scales[i] * prior.scales[i]);
    prior.aux[i] = inv_gamma_draw(0.5 * (prior.df + d), scale, rng);
  }
  const Mat post_scale =
      alpha * alpha.transpose() + Mat(2.0 * prior.df * prior.aux.cwiseInverse().asDiagonal());
  return sample_inverse_wishart(prior.df + static_cast<double>(alpha.cols()) + d - 1, post_scale,
                                rng);
}

Mat sample_hiw_prior(HiwPrior& prior, Rng& rng) {
  prior.validate();
  const int d = static_cast<int>(prior.scales.size());
  for (int i = 0; i < d; ++i)
    prior.aux[i] = inv_gamma_draw(0.5, 1.0 / (prior.scales[i] * prior.scales[i]), rng);
  return sample_inverse_wishart(prior.df + d - 1,
                                Mat(2.0 * prior.df * prior.aux.cwiseInverse().asDiagonal()), rng);
}

Vec horseshoe_variances(const HorseshoeState& state) {
  const int n = static_cast<int>(state.shrink_mask.size());
  Vec v(n);
  const double tau2 = state.global * state.global;
  for (int i = 0; i < n; ++i) {
    v[i] = state.shrink_mask[i]
               ? std::max(tau2 * state.local[i] * state.local[i], kMinPriorVariance)
               : state.intercept_variance;
  }
  return v;
}

Vec horseshoe_update(const Vec& beta, HorseshoeState& state, Rng& rng) {
  const int n = static_cast<int>(state.shrink_mask.size());
  if (beta.size() != n) throw std::invalid_argument("horseshoe mask length must equal beta length");
  const int m = state.shrunk_count();
  if (m > 0) {
    const double tau2 = state.global * state.global;
    auto ratio = [](double b2, double s2) { return b2 == 0.0 ? 0.0 : b2 / (2.0 * s2); };
    double sum_scaled = 0.0;
    for (int i = 0; i < n; ++i) {
      if (!state.shrink_mask[i]) continue;
      const double b2 = beta[i] * beta[i];
      const double lambda2 =
          inv_gamma_draw(1.0, 1.0 / state.local_aux[i] + ratio(b2, tau2), rng);
      state.local[i] = std::sqrt(lambda2);
      state.local_aux[i] = inv_gamma_draw(1.0, 1.0 + 1.0 / lambda2, rng);
      sum_scaled += ratio(b2, lambda2);
    }
    const double new_tau2 = inv_gamma_draw(0.5 * (m + 1), 1.0 / state.global_aux + sum_scaled, rng);
    state.global = std::sqrt(new_tau2);
    state.global_aux = inv_gamma_draw(1.0, 1.0 + 1.0 / new_tau2, rng);
  }
  return horseshoe_variances(state);
}

Vec sample_horseshoe_prior(HorseshoeState& state, Rng& rng) {
  const int n = static_cast<int>(state.shrink_mask.size());
  state.global = half_cauchy_draw(rng);
  state.global_aux = inv_gamma_draw(1.0, 1.0 + 1.0 / (state.global * state.global), rng);
  for (int i = 0; i < n; ++i) {
    if (!state.shrink_mask[i]) continue;
    state.local[i] = half_cauchy_draw(rng);
    state.local_aux[i] = inv_gamma_draw(1.0, 1.0 + 1.0 / (state.local[i] * state.local[i]), rng);
  }
  const Vec var = horseshoe_variances(state);
  Vec beta(n);
  for (int i = 0; i < n; ++i) beta[i] = std::sqrt(var[i]) * std_normal(rng);
  return beta;
}

}  // namespace mvp
