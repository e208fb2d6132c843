#pragma once

// Balanced binary panel: D outcomes for P individuals over T periods, with
// observation-level covariates (column 0 is the constant) and optional
// individual-level covariates.

#include "mvp/linalg.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace mvp {

struct PanelData {
  int n_outcomes = 0;     // D
  int n_individuals = 0;  // P
  int n_periods = 0;      // T
  std::vector<std::uint8_t> y;  // index ((i * T) + t) * D + d
  Mat x;                        // (P * T) x K, row i * T + t
  Mat z;                        // P x G individual-level covariates, may be empty
  std::vector<std::string> outcome_labels;
  std::vector<std::string> covariate_labels;   // K names, first is "intercept"
  std::vector<std::string> individual_labels;  // G names

  int n_covariates() const { return static_cast<int>(x.cols()); }
  int n_obs() const { return n_individuals * n_periods; }
  int row(int i, int t) const { return i * n_periods + t; }
  std::uint8_t y_at(int i, int t, int d) const {
    return y[static_cast<std::size_t>(row(i, t)) * n_outcomes + d];
  }

  /// Checks sizes, y in {0, 1}, finite covariates and the constant column.
  void validate() const;
};

/// Appends z_i to every observation row of individual i, so the
/// individual-level coefficients become extra columns of B.
PanelData augment_individual_covariates(const PanelData& data);

struct CategoricalAttribute {
  std::string name;
  std::vector<std::string> levels;
  std::string base;
};

struct NumericAttribute {
  std::string name;
  bool individual_level = false;
};

/// Describes how raw CSV columns become covariates.
struct CodebookSpec {
  std::vector<std::string> outcomes;
  std::vector<CategoricalAttribute> categorical;
  std::vector<NumericAttribute> numeric;

  void validate() const;
  /// Intercept, then the non-base levels of each categorical attribute in
  /// level order, then observation-level numeric attributes.
  std::vector<std::string> covariate_names() const;
  std::vector<std::string> individual_names() const;

  static CodebookSpec from_json_text(const std::string& text);
  std::string to_json_text() const;
};

CodebookSpec read_codebook(const std::string& path);
void write_codebook(const CodebookSpec& codebook, const std::string& path);

/// Codebook that reads back a panel written by write_panel_csv as purely
/// numeric columns.
CodebookSpec numeric_codebook(const PanelData& data);

struct RawTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  int column(const std::string& name) const;  // -1 if absent
};

RawTable read_csv(const std::string& path);
RawTable parse_csv(const std::string& text);

struct EncodedCovariates {
  Mat x;
  std::vector<std::string> names;
};

/// Dummy-encodes the categorical attributes and passes observation-level
/// numeric attributes through. Unknown levels throw std::invalid_argument
/// naming the row and attribute.
EncodedCovariates encode_categoricals(const RawTable& raw, const CodebookSpec& codebook);

/// Reads a long CSV with columns individual, period, the outcomes and the
/// attribute columns. Rows may come in any order; the panel must be
/// balanced.
PanelData read_panel_csv(const std::string& path, const CodebookSpec& codebook);
PanelData panel_from_table(const RawTable& raw, const CodebookSpec& codebook);

/// Writes covariates as numbers with 17 significant digits; the
/// intercept column is implied and not written.
void write_panel_csv(const PanelData& data, const std::string& path);
std::string panel_to_csv(const PanelData& data);

}  // namespace mvp
