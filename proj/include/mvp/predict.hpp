#pragma once

#include "mvp/gibbs.hpp"

#include <string>
#include <vector>

namespace mvp {

/// Event whose posterior-predictive probability is computed. Outcome
/// indices are 0-based here and 1-based in names.
struct PredictiveEvent {
  enum class Kind { Single, AtLeastOne, All };
  Kind kind = Kind::Single;
  std::vector<int> outcomes;

  static PredictiveEvent single(int d) { return {Kind::Single, {d}}; }
  static PredictiveEvent at_least_one(std::vector<int> ds) { return {Kind::AtLeastOne, std::move(ds)}; }
  static PredictiveEvent all(std::vector<int> ds) { return {Kind::All, std::move(ds)}; }

  /// "P(y3=1)", "P(y3+y4>=1)" or "P(y3=1,y4=1)".
  std::string name() const;
  void validate(int n_outcomes) const;
};

struct PredictiveSummary {
  std::string column;
  Mat probability;  // draws x individuals
  Vec mean, median, lower, upper;  // per individual; lower/upper are 2.5% / 97.5%
};

/// P(event | alpha_i, B, R) for every kept draw and individual. Single
/// outcomes use Phi(mu_d); joint events use n_mc draws of eps ~ N(0, R).
PredictiveSummary posterior_predictive(const ChainDraws& draws, const Vec& x_new,
                                       const PredictiveEvent& event, int n_mc, Rng& rng);
/// Same with one covariate row per individual (or a single shared row).
PredictiveSummary posterior_predictive(const ChainDraws& draws, const Mat& x_rows,
                                       const PredictiveEvent& event, int n_mc, Rng& rng);

/// Monte Carlo probability of the event for a single mean vector.
double event_probability_mc(const Vec& mu, const Mat& corr, const PredictiveEvent& event, int n_mc,
                            Rng& rng);

std::string predictive_to_csv(const std::vector<PredictiveSummary>& columns);

}  // namespace mvp
