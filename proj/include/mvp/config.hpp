#pragma once

// JSON fit configuration. Every key is optional except data.panel; unknown
// keys are rejected so typos surface before a long run.
//
// {
//   "data":    {"panel": "panel.csv", "codebook": "codebook.json"},
//   "model":   {"type": 1, "px_comparison": false},
//   "priors":  {"beta": "normal", "beta_variance": 100, "individual_variance": 100,
//               "intercept_variance": 100, "sigma_alpha": "iw", "iw_df": 9,
//               "iw_scale": [[...]], "hiw_df": 2, "hiw_scales": [...], "corr_nu": 9},
//   "sampler": {"iterations": 30000, "burn_in": 5000, "thin": 1,
//               "beta_mode": "antithetic", "alpha_mode": "antithetic",
//               "switch_on": 5000, "store_alpha": true, "store_ystar": 0},
//   "hmc":     {"adapt": true, "step_size": 0.1, "target_accept": 0.8, "max_depth": 10,
//               "max_delta_h": 1000, "inv_mass": [...], "gamma": 0.05, "t0": 10,
//               "kappa": 0.75},
//   "seed": 1,
//   "replicates": 1,
//   "output": {"directory": "fit"}
// }
//
// Relative paths resolve against the directory holding the config file.

#include "mvp/gibbs.hpp"

#include <cstdint>
#include <stdexcept>
#include <string>

namespace mvp {

/// Invalid or unreadable configuration (CLI exit code 2).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct FitConfig {
  std::string panel_path;
  std::string codebook_path;  // empty: numeric columns as written by `simulate`
  int model = 1;              // 2 adds individual-level covariates
  bool px_comparison = false;
  PriorSpec priors;
  SamplerConfig sampler;
  int replicates = 1;
  std::string output_directory;  // empty: output root + "/fit"
  std::string source_text;       // the JSON as read, echoed into draw headers

  /// Throws ConfigError with the offending key.
  static FitConfig from_json_text(const std::string& text, const std::string& base_dir = "");
  static FitConfig from_file(const std::string& path);
  std::string to_json_text() const;
};

/// Reads the panel named by the config. Without a codebook path, a
/// codebook.json next to the panel is used.
PanelData load_fit_panel(const FitConfig& cfg);

/// Output root: $MVPROBIT_OUTPUT_ROOT if set, otherwise the current directory.
std::string default_output_root();

}  // namespace mvp
