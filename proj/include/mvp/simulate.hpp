#pragma once

// Draws a balanced panel from the generative model
//   y*_it = alpha_i + B x_it (+ C z_i) + eps_it,  eps ~ N(0, R),  alpha ~ N(0, Sigma_alpha),
// keeping the latent ground truth for accuracy checks.

#include "mvp/reference_params.hpp"
#include "mvp/random.hpp"

#include <cstdint>

namespace mvp {

struct TrueParams {
  Mat beta;         // D x K
  Mat gamma;        // D x G, may be empty
  Mat corr;         // D x D correlation
  Mat sigma_alpha;  // D x D covariance; all-zero allowed (no random effects)

  int dim() const { return static_cast<int>(beta.rows()); }
  void validate() const;
};

/// How observation-level covariates are drawn. Column 0 is always 1.
struct CovariateGenerator {
  enum class Kind { Design, Gaussian };
  Kind kind = Kind::Gaussian;
  CodebookSpec codebook;  // Design: each categorical level uniform per row
  int n_covariates = 1;   // Gaussian: K including the constant
  double scale = 1.0;     // Gaussian: sd of non-constant columns

  static CovariateGenerator design(CodebookSpec codebook);
  static CovariateGenerator gaussian(int n_covariates, double scale = 1.0);
  int width() const;
  Mat draw(int rows, Rng& rng) const;
  std::vector<std::string> names() const;
};

/// Individual-level covariates: Bernoulli(1/2) for binary columns,
/// N(0, 1) otherwise (continuous columns are treated as standardised).
struct IndividualGenerator {
  std::vector<std::string> names;
  std::vector<bool> binary;

  Mat draw(int individuals, Rng& rng) const;
};

struct SimulatedPanel {
  PanelData data;
  TrueParams truth;
  Mat alpha;  // D x P
  Mat ystar;  // D x (P*T)
};

SimulatedPanel simulate_panel(const TrueParams& truth, int individuals, int periods,
                              const CovariateGenerator& covariates, std::uint64_t seed,
                              const IndividualGenerator& individual = {});

/// Model 1 truth from the shipped parameter set.
TrueParams reference_truth_model1();
/// Model 2 truth (patient and GP coefficients).
TrueParams reference_truth_model2();

/// JSON rendering of the ground truth (17 significant digits).
std::string truth_to_json(const SimulatedPanel& sim);

}  // namespace mvp
