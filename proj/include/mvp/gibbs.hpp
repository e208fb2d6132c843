#pragma once

// Blocked Gibbs sampler for the multivariate probit model with individual
// random effects:
//   1. latents y* (truncated normals, one coordinate at a time)
//   2. coefficients beta (Gaussian block; independent or antithetic)
//   3. error correlation through its unit Cholesky factor (NUTS)
//   4. random effects alpha_i (Gaussian blocks; independent or antithetic)
//   5. Sigma_alpha (inverse-Wishart or hierarchical inverse-Wishart)
// A horseshoe prior on beta adds an auxiliary update before step 2.

#include "mvp/corr_repar.hpp"
#include "mvp/nuts.hpp"
#include "mvp/panel_data.hpp"
#include "mvp/priors.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace mvp {

enum class BetaPriorKind { Normal, Horseshoe };
enum class SigmaAlphaPriorKind { InverseWishart, Hierarchical };

struct PriorSpec {
  BetaPriorKind beta = BetaPriorKind::Normal;
  double beta_variance = 100.0;        // normal prior: Psi_beta = v I
  std::optional<double> individual_variance;  // Model 2 columns; defaults to beta_variance
  double intercept_variance = 100.0;   // horseshoe: fixed variance of intercepts
  SigmaAlphaPriorKind sigma_alpha = SigmaAlphaPriorKind::InverseWishart;
  std::optional<double> iw_df;         // default D + 1
  std::optional<Mat> iw_scale;         // default I
  double hiw_df = 2.0;
  std::optional<Vec> hiw_scales;       // default all 1
  std::optional<double> corr_nu;       // default D + 1
};

struct ModelSpec {
  int n_outcomes = 1;     // D
  int n_covariates = 1;   // K, observation-level including the constant
  int n_individual = 0;   // G (> 0 means Model 2)
  PriorSpec priors;
  bool include_px_comparison = false;

  int coef_per_outcome() const { return n_covariates + n_individual; }
  int n_beta() const { return n_outcomes * coef_per_outcome(); }
  double iw_df() const;
  Mat iw_scale() const;
  Vec hiw_scales() const;
  double corr_nu() const;
  /// Prior variance diagonal of beta under the normal prior.
  Vec normal_prior_variance() const;
  std::vector<bool> shrink_mask() const;
  void validate() const;

  /// Spec matching a data set; Model 2 when `use_individual` and z exists.
  static ModelSpec for_data(const PanelData& data, bool use_individual, PriorSpec priors = {});
};

struct SamplerConfig {
  int iterations = 1000;  // total sweeps including burn-in
  int burn_in = 500;
  int thin = 1;
  ProposalMode beta_mode = proposal::Antithetic{};
  ProposalMode alpha_mode = proposal::Antithetic{};
  /// Sweeps before this index use independent draws for beta and alpha.
  /// Defaults to the end of burn-in.
  std::optional<int> switch_on;
  std::uint64_t seed = 1;
  HmcConfig hmc;
  bool adapt_step_size = true;
  bool store_alpha = true;
  int store_ystar = 0;  // number of leading latent cells kept per draw
  /// Test hook: multiplies the covariance of independent alpha draws.
  double fault_alpha_variance_scale = 1.0;

  int switch_on_iteration() const { return switch_on.value_or(burn_in); }
  int kept_draws() const;
  void validate() const;
};

struct ParamState {
  Mat ystar;  // D x (P*T)
  Mat alpha;  // D x P
  Vec beta;   // D * K~, outcome-major
  UnitCholesky chol{1};
  Mat corr;       // cached R(L)
  Mat corr_inv;   // cached R^{-1}
  Mat sigma_alpha;
  HorseshoeState horseshoe;
  HiwPrior hiw;
  Vec beta_prior_variance;

  /// B as a D x K~ matrix (row d = outcome d).
  Mat beta_matrix(int coef_per_outcome) const;
  void set_corr(const UnitCholesky& l);
};

/// Named parameter blocks for diagnostics and persistence.
enum class Block { YStar, Alpha, Beta, CholL, CorrR, DiagSigmaAlpha, CorrAlpha, SigmaAlpha };
std::string block_name(Block b);
std::optional<Block> parse_block(const std::string& name);

struct ChainDraws {
  int n_outcomes = 0;
  int coef_per_outcome = 0;
  int n_individuals = 0;
  std::uint64_t seed = 0;
  std::string method = "hmc";  // or "px"
  std::vector<std::string> beta_names;

  std::vector<Vec> beta, chol_l, corr_r, diag_sigma_alpha, corr_alpha, sigma_alpha, alpha, ystar;
  std::vector<int> divergent;  // per kept draw
  std::vector<double> accept_stat, step_size;
  std::vector<int> tree_depth;
  long total_divergences = 0;
  double seconds_total = 0.0;
  int iterations_run = 0;

  std::size_t size() const { return beta.size(); }
  double seconds_per_iteration() const {
    return iterations_run > 0 ? seconds_total / iterations_run : 0.0;
  }
  const std::vector<Vec>& block(Block b) const;
  std::vector<Vec>& block(Block b);
  /// Draws x parameters matrix of one block.
  Mat matrix(Block b) const;
  std::vector<double> series(Block b, int index) const;
  std::vector<std::string> column_names(Block b) const;
};

/// Stepwise access to the sampler (used by run_chain and the Geweke test).
class GibbsSampler {
 public:
  GibbsSampler(const PanelData& data, ModelSpec spec, SamplerConfig cfg);

  ParamState& state() { return state_; }
  const ParamState& state() const { return state_; }
  PanelData& data() { return data_; }
  const ModelSpec& spec() const { return spec_; }
  SamplerConfig& config() { return cfg_; }
  Rng& rng() { return rng_; }

  /// Full sweep; `iteration` selects the proposal mode and adaptation.
  void sweep(int iteration);

  void update_latents();
  void update_horseshoe();
  void update_beta(const ProposalMode& mode);
  NutsTransition update_corr(bool adapting);
  void update_alpha(const ProposalMode& mode);
  void update_sigma_alpha();

  /// Conditional mean and precision of beta; exposed for tests.
  void beta_conditional(Vec& mean, Mat& precision) const;
  /// Common covariance of every alpha_i and the conditional means (D x P).
  void alpha_conditional(Mat& means, Mat& covariance) const;
  /// Residuals y* - alpha - B x as a scatter.
  ResidualScatter corr_residuals() const;

  /// Copies y = 1[y* > 0] into the data (Geweke test).
  void sync_outcomes_from_latents();
  /// Re-draws every y* inside its truncation region from scratch state
  /// consistent with y (used after the data changes).
  void reset_latents_to_signs();

  const NutsTransition& last_nuts() const { return last_nuts_; }
  void record(ChainDraws& draws) const;
  ChainDraws empty_draws() const;

 private:
  PanelData data_;
  ModelSpec spec_;
  SamplerConfig cfg_;
  Rng rng_;
  ParamState state_;
  Mat xtx_;  // X'X
  NutsTransition last_nuts_;
  bool adaptation_finished_ = false;
};

/// Runs a full chain. Uses z when spec.n_individual > 0.
ChainDraws run_chain(const PanelData& data, const ModelSpec& spec, const SamplerConfig& cfg);

/// Parameter-expansion comparison chain (identity-scaled IW prior on the
/// expanded covariance, matrix-normal prior on the expanded coefficients,
/// HIW on Sigma_alpha).
ChainDraws run_px_chain(const PanelData& data, const ModelSpec& spec, const SamplerConfig& cfg);

/// Covariate matrix including z columns when the spec asks for Model 2.
PanelData prepare_data(const PanelData& data, const ModelSpec& spec);

}  // namespace mvp
