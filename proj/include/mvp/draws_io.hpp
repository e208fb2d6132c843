#pragma once

// Chain artifacts on disk. One directory per chain:
//   header.json             dimensions, seed, method, labels, config, timings
//   beta.csv, vechL_L.csv, vechL_R.csv, diag_sigma_alpha.csv,
//   vechL_R_alpha.csv, sigma_alpha.csv, alpha.csv, ystar.csv (when stored)
//   sampler.csv             per-draw NUTS diagnostics
// CSV values use 17 significant digits; timings appear only in the header,
// so two runs with the same seed give byte-identical CSV files.

#include "mvp/gibbs.hpp"

#include <string>

namespace mvp {

struct DrawsHeader {
  std::string config_json;  // may be empty
  std::string spec_json;    // may be empty
  std::vector<std::string> outcome_labels;
};

void write_chain(const std::string& directory, const ChainDraws& draws, const DrawsHeader& header);

/// Reads everything write_chain produced; throws std::runtime_error on
/// missing or malformed files.
ChainDraws read_chain(const std::string& directory, DrawsHeader* header = nullptr);

std::string block_csv(const ChainDraws& draws, Block b);

/// Serialises the model spec for headers.
std::string spec_to_json(const ModelSpec& spec);

}  // namespace mvp
