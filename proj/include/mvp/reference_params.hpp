#pragma once

// Shipped ground-truth parameter set (D = 8 products, 27 patient covariates,
// 7 GP covariates for the extended model), used to simulate survey-shaped
// panels with known truth.

#include "mvp/panel_data.hpp"

#include <string>
#include <vector>

namespace mvp {

struct ModelParameterSet {
  Mat beta;         // D x K, row d holds outcome d's coefficients
  Mat gamma;        // D x G individual-level coefficients (empty for Model 1)
  Mat corr;         // R_eps
  Mat sigma_alpha;  // Sigma_alpha
};

struct ReferenceParameterSet {
  ModelParameterSet model1;
  ModelParameterSet model2;
  std::vector<std::string> outcome_labels;      // product1..product8
  std::vector<std::string> covariate_labels;    // intercept + 26 dummies
  std::vector<std::string> individual_labels;   // GP covariates
  std::vector<bool> individual_binary;          // false only for age
  CodebookSpec codebook;                        // patient attributes
};

const ReferenceParameterSet& reference_parameter_set();

/// Patient attribute codebook with the base-case levels as bases.
CodebookSpec reference_codebook();

}  // namespace mvp
