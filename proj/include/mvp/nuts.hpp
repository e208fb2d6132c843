#pragma once

// No-U-Turn sampler with multinomial trajectory sampling and dual-averaging
// step-size adaptation (Hoffman and Gelman 2014; Betancourt 2017).

#include "mvp/samplers.hpp"

namespace mvp {

struct HmcConfig {
  double step_size = 1.0;
  Vec inv_mass;  // diagonal; empty means identity
  double target_accept = 0.8;
  int max_depth = 10;
  double max_delta_h = 1000.0;

  // Dual-averaging constants.
  double gamma = 0.05;
  double t0 = 10.0;
  double kappa = 0.75;

  // Dual-averaging state.
  double mu = 0.0;
  double s_bar = 0.0;
  double x_bar = 0.0;
  long counter = 0;
  bool step_size_initialised = false;

  void validate() const;
  /// Resets the averaging state around mu = log(10 eps).
  void restart();
};

struct NutsTransition {
  Vec theta;
  double log_density = 0.0;
  double accept_stat = 0.0;
  int depth = 0;
  int n_leapfrog = 0;
  bool divergent = false;
};

/// Heuristic search for a step size giving acceptance near 0.8 for one
/// leapfrog step; then restarts dual averaging.
void init_step_size(const LogDensityFn& log_density, const Vec& theta0, HmcConfig& cfg, Rng& rng);

/// One NUTS transition. When `adapting`, the step size is updated by dual
/// averaging afterwards. A divergent subtree stops the doubling; the draw
/// then comes from the trajectory built before it.
NutsTransition nuts_sample(const LogDensityFn& log_density, const Vec& theta0, HmcConfig& cfg,
                           bool adapting, Rng& rng);

/// Freezes the step size at the averaged value.
void finish_adaptation(HmcConfig& cfg);

}  // namespace mvp
