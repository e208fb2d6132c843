#pragma once

// Chain diagnostics: integrated autocorrelation time, effective sample size,
// summaries, RMSE against a known truth and run-vs-run efficiency reports.

#include "mvp/gibbs.hpp"

#include <algorithm>
#include <string>
#include <vector>

namespace mvp {

enum class IactMethod {
  Geyer,       // initial positive sequence on paired autocorrelations
  ArSpectral,  // spectral density at zero of an AIC-selected AR fit
};

std::string to_string(IactMethod m);
IactMethod parse_iact_method(const std::string& s);

/// IACT = 1 + 2 sum rho_j. Throws std::invalid_argument for fewer than 10
/// draws, non-finite values or a constant series. Geyer estimates are
/// floored at 1 / log10(n).
double iact(const std::vector<double>& x, IactMethod method = IactMethod::Geyer);
double iact_geyer(const std::vector<double>& x);
double iact_ar_spectral(const std::vector<double>& x);

/// n / IACT.
double ess(const std::vector<double>& x, IactMethod method = IactMethod::Geyer);

/// Sample autocorrelation at lags 0..max_lag.
std::vector<double> autocorrelation(const std::vector<double>& x, int max_lag);

struct SeriesSummary {
  double mean = 0, sd = 0, median = 0, lower = 0, upper = 0;  // 2.5% / 97.5%
  double iact = 0, ess = 0;
};

SeriesSummary summarize(const std::vector<double>& x, IactMethod method = IactMethod::Geyer);

/// Empirical quantile with linear interpolation (type 7).
double quantile(std::vector<double> x, double p);

/// sqrt(mean((draw - truth)^2)).
double rmse(const std::vector<double>& draws, double truth);
/// Per-column RMSE of a draws x parameters matrix.
Vec rmse(const Mat& draws, const Vec& truth);

/// Two-sample Kolmogorov-Smirnov distance.
double ks_distance(std::vector<double> a, std::vector<double> b);
/// One-sample distance to a continuous CDF.
template <class Cdf>
double ks_distance(std::vector<double> x, Cdf cdf);
/// Asymptotic p-value of sqrt(n) * D under the Kolmogorov distribution.
double kolmogorov_pvalue(double d, double n_effective);

struct BlockRatio {
  std::string block;
  int n_params = 0;     // parameters with a defined ratio
  int n_skipped = 0;    // constant in either run
  double mean_iact_a = 0, mean_iact_b = 0;
  double ratio_min = 0, ratio_max = 0, ratio_mean = 0, ratio_median = 0;
  double seconds_per_iter_a = 0, seconds_per_iter_b = 0;
  std::vector<double> ratios;  // IACT_a / IACT_b per parameter (NaN if skipped)
};

/// Per-parameter IACT_a / IACT_b. Mismatched block dimensions throw.
std::vector<BlockRatio> iact_ratio_report(const ChainDraws& a, const ChainDraws& b,
                                          const std::vector<Block>& blocks,
                                          IactMethod method = IactMethod::Geyer);

std::string ratio_report_text(const std::vector<BlockRatio>& report);
std::string ratio_report_csv(const std::vector<BlockRatio>& report);

struct ParameterSummary {
  std::string block, name;
  SeriesSummary s;
};

std::vector<ParameterSummary> summarize_draws(const ChainDraws& draws,
                                              const std::vector<Block>& blocks,
                                              IactMethod method = IactMethod::Geyer);
std::string summary_text(const std::vector<ParameterSummary>& rows);
std::string summary_csv(const std::vector<ParameterSummary>& rows);

// ---------------------------------------------------------------------------

template <class Cdf>
double ks_distance(std::vector<double> x, Cdf cdf) {
  std::sort(x.begin(), x.end());
  const double n = static_cast<double>(x.size());
  double d = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double f = cdf(x[i]);
    d = std::max({d, (i + 1) / n - f, f - i / n});
  }
  return d;
}

}  // namespace mvp
