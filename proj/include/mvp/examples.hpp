#pragma once

// Small self-contained studies: two-block Gibbs on a correlated bivariate
// normal (per-margin proposal modes), and draws from the marginally uniform
// correlation prior with dependence summaries.

#include "mvp/samplers.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace mvp {

struct BivariateGibbsConfig {
  double rho = 0.99;
  int iterations = 10000;
  double start1 = 2.0, start2 = 2.0;
  ProposalMode margin1 = proposal::Independent{};
  ProposalMode margin2 = proposal::Independent{};
  std::uint64_t seed = 1;

  /// Rejects |rho| >= 1 and the non-ergodic all-deterministic scheme.
  void validate() const;
};

/// iterations x 2 draws; each margin is updated given the other's newest value.
Mat run_bivariate_gibbs(const BivariateGibbsConfig& cfg);

struct PriorStudyConfig {
  int dim = 4;
  double nu = 5.0;
  int draws = 100000;
  std::uint64_t seed = 1;
};

struct PriorStudy {
  int dim = 0;
  Mat corr;     // draws x D(D-1)/2, vechl order
  Mat partial;  // draws x D(D-1)/2, partial correlations given the rest

  struct Pair {
    std::string a, b;
    double correlation;
  };
  /// KS p-values of each r_ij against Uniform(-1, 1) and each partial
  /// against the rescaled Beta(D/2, D/2) implied by nu = D + 1.
  std::vector<double> corr_uniform_pvalues() const;
  std::vector<double> partial_beta_pvalues() const;
  /// Pearson correlation of |r_ij| and |r_ik| over pairs sharing an index.
  std::vector<Pair> shared_index_abs_dependence() const;
  /// Pearson correlations between distinct partial correlations.
  std::vector<Pair> partial_pairwise_correlation() const;
  std::vector<std::string> names(const std::string& prefix) const;
};

PriorStudy run_prior_study(const PriorStudyConfig& cfg);

std::string prior_study_summary_csv(const PriorStudy& study);
std::string prior_study_draws_csv(const Mat& draws, const std::vector<std::string>& names);

/// Pearson correlation of two equally long series.
double pearson(const Eigen::Ref<const Vec>& a, const Eigen::Ref<const Vec>& b);

}  // namespace mvp
