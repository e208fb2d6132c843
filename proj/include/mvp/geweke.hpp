#pragma once

// Joint-distribution test of the Gibbs engine. Moments of bounded test
// functions are compared between
//   (a) independent draws of the parameters from the prior, and
//   (b) Gibbs chains that re-simulate the data from the current parameters
//       before every sweep.
// Both target the prior marginal of the parameters, so a correct sampler
// gives z-scores that look standard normal.

#include "mvp/gibbs.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace mvp {

struct GewekeConfig {
  ModelSpec spec;           // small dimensions (under 50 parameters)
  int n_individuals = 3;
  int n_periods = 2;
  int prior_draws = 100000;
  int sweeps = 100000;      // successive-conditional sweeps, split evenly over chains
  int chains = 400;         // independent chains, each started from a prior draw
  int burn_in = 2000;       // pilot run that tunes the NUTS step size
  ProposalMode beta_mode = proposal::Independent{};
  ProposalMode alpha_mode = proposal::Independent{};
  double fault_alpha_variance_scale = 1.0;
  std::uint64_t seed = 1;

  void validate() const;
  /// D = 2, K = 2 defaults with unit-scale priors.
  static GewekeConfig small(BetaPriorKind beta, SigmaAlphaPriorKind sigma);
};

/// One prior draw of every parameter the sampler carries.
struct PriorDraw {
  Vec beta;
  HorseshoeState horseshoe;
  UnitCholesky chol{1};
  Mat sigma_alpha;
  Vec hiw_aux;
  Mat alpha;  // D x P
};

PriorDraw draw_from_prior(const ModelSpec& spec, int n_individuals, Rng& rng);

/// Test-function values; names() matches the order.
struct GewekeFunctions {
  std::vector<std::string> names;
  std::vector<double> values;
};
GewekeFunctions geweke_functions(const ModelSpec& spec, const Vec& beta, const Mat& corr,
                                 const Mat& sigma_alpha, const Mat& alpha,
                                 const HorseshoeState* horseshoe, const Vec* hiw_aux);

struct GewekeMoment {
  std::string name;
  double prior_mean = 0, prior_se = 0;
  double chain_mean = 0, chain_se = 0;
  double z = 0;
};

struct GewekeResult {
  std::vector<GewekeMoment> moments;
  double max_abs_z = 0;
  std::string worst;
  long divergences = 0;
};

/// Throws std::runtime_error if any moment is non-finite.
GewekeResult geweke_joint_test(const GewekeConfig& cfg);

std::string geweke_table(const GewekeResult& r);
std::string geweke_csv(const GewekeResult& r);

}  // namespace mvp
