#include "mvp/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace mvp {

namespace {

std::vector<double> centred(const std::vector<double>& x) {
  if (x.size() < 10) throw std::invalid_argument("IACT needs at least 10 draws");
  double mean = 0.0;
  for (double v : x) {
    if (!std::isfinite(v)) throw std::invalid_argument("IACT of a non-finite series");
    mean += v;
  }
  mean /= static_cast<double>(x.size());
  std::vector<double> c(x.size());
  bool constant = true;
  for (std::size_t i = 0; i < x.size(); ++i) {
    c[i] = x[i] - mean;
    if (x[i] != x[0]) constant = false;
  }
  if (constant) throw std::invalid_argument("IACT of a constant series");
  return c;
}

// Biased (divide-by-n) autocovariance at one lag.
double autocov(const std::vector<double>& c, std::size_t lag) {
  double s = 0.0;
  for (std::size_t t = 0; t + lag < c.size(); ++t) s += c[t] * c[t + lag];
  return s / static_cast<double>(c.size());
}

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

}  // namespace

std::string to_string(IactMethod m) { return m == IactMethod::Geyer ? "geyer" : "ar"; }

IactMethod parse_iact_method(const std::string& s) {
  if (s == "geyer") return IactMethod::Geyer;
  if (s == "ar") return IactMethod::ArSpectral;
  throw std::invalid_argument("unknown IACT method '" + s + "' (geyer|ar)");
}

double iact_geyer(const std::vector<double>& x) {
  const auto c = centred(x);
  const std::size_t n = c.size();
  const double g0 = autocov(c, 0);
  double sum = 0.0;
  for (std::size_t m = 0; 2 * m + 1 < n; ++m) {
    const double pair = autocov(c, 2 * m) + autocov(c, 2 * m + 1);
    if (pair <= 0.0) break;
    sum += pair;
  }
  const double tau = (-g0 + 2.0 * sum) / g0;
  return std::max(tau, 1.0 / std::log10(static_cast<double>(n)));
}

double iact_ar_spectral(const std::vector<double>& x) {
  const auto c = centred(x);
  const std::size_t n = c.size();
  const double nd = static_cast<double>(n);
  const int max_order =
      static_cast<int>(std::min<double>(nd - 1.0, std::floor(10.0 * std::log10(nd))));
  std::vector<double> gamma(max_order + 1);
  for (int k = 0; k <= max_order; ++k) gamma[k] = autocov(c, k);

  // Levinson-Durbin, keeping the AIC-best order.
  std::vector<double> phi, best_phi;
  double v = gamma[0];
  double best_aic = nd * std::log(v);
  double best_v = v;
  int best_p = 0;
  for (int p = 1; p <= max_order; ++p) {
    double num = gamma[p];
    for (int j = 0; j < p - 1; ++j) num -= phi[j] * gamma[p - 1 - j];
    const double k = num / v;
    std::vector<double> next(p);
    for (int j = 0; j < p - 1; ++j) next[j] = phi[j] - k * phi[p - 2 - j];
    next[p - 1] = k;
    phi = std::move(next);
    v *= (1.0 - k * k);
    if (!(v > 0.0)) break;
    const double aic = nd * std::log(v) + 2.0 * p;
    if (aic < best_aic) {
      best_aic = aic;
      best_phi = phi;
      best_v = v;
      best_p = p;
    }
  }
  const double var_pred = best_v * nd / (nd - (best_p + 1));
  const double denom = 1.0 - std::accumulate(best_phi.begin(), best_phi.end(), 0.0);
  const double spec0 = var_pred / (denom * denom);
  const double sample_var = gamma[0] * nd / (nd - 1.0);
  return spec0 / sample_var;
}

double iact(const std::vector<double>& x, IactMethod method) {
  return method == IactMethod::Geyer ? iact_geyer(x) : iact_ar_spectral(x);
}

double ess(const std::vector<double>& x, IactMethod method) {
  return static_cast<double>(x.size()) / iact(x, method);
}

std::vector<double> autocorrelation(const std::vector<double>& x, int max_lag) {
  const auto c = centred(x);
  const double g0 = autocov(c, 0);
  std::vector<double> r;
  for (int k = 0; k <= max_lag && k < static_cast<int>(c.size()); ++k)
    r.push_back(autocov(c, k) / g0);
  return r;
}

double quantile(std::vector<double> x, double p) {
  if (x.empty()) throw std::invalid_argument("quantile of an empty series");
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("quantile level outside [0, 1]");
  std::sort(x.begin(), x.end());
  const double h = (static_cast<double>(x.size()) - 1.0) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, x.size() - 1);
  return x[lo] + (h - static_cast<double>(lo)) * (x[hi] - x[lo]);
}

SeriesSummary summarize(const std::vector<double>& x, IactMethod method) {
  if (x.size() < 2) throw std::invalid_argument("summary needs at least 2 draws");
  SeriesSummary s;
  const double n = static_cast<double>(x.size());
  s.mean = std::accumulate(x.begin(), x.end(), 0.0) / n;
  double ss = 0.0;
  for (double v : x) ss += (v - s.mean) * (v - s.mean);
  s.sd = std::sqrt(ss / (n - 1.0));
  s.median = quantile(x, 0.5);
  s.lower = quantile(x, 0.025);
  s.upper = quantile(x, 0.975);
  try {
    s.iact = iact(x, method);
    s.ess = n / s.iact;
  } catch (const std::invalid_argument&) {
    s.iact = s.ess = std::numeric_limits<double>::quiet_NaN();
  }
  return s;
}

double rmse(const std::vector<double>& draws, double truth) {
  if (draws.empty()) throw std::invalid_argument("RMSE of no draws");
  double s = 0.0;
  for (double v : draws) s += (v - truth) * (v - truth);
  return std::sqrt(s / static_cast<double>(draws.size()));
}

Vec rmse(const Mat& draws, const Vec& truth) {
  if (draws.cols() != truth.size())
    throw std::invalid_argument("RMSE: draws have " + std::to_string(draws.cols()) +
                                " columns, truth has " + std::to_string(truth.size()));
  if (draws.rows() == 0) throw std::invalid_argument("RMSE of no draws");
  return (draws.rowwise() - truth.transpose()).array().square().colwise().mean().sqrt().transpose();
}

double ks_distance(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("KS distance of an empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double v = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= v) ++i;
    while (j < b.size() && b[j] <= v) ++j;
    d = std::max(d, std::abs(i / na - j / nb));
  }
  return d;
}

double kolmogorov_pvalue(double d, double n_effective) {
  const double sn = std::sqrt(n_effective);
  // Stephens' small-sample correction.
  const double lambda = (sn + 0.12 + 0.11 / sn) * d;
  if (lambda < 0.2) return 1.0;
  double p = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = 2.0 * ((k % 2) ? 1.0 : -1.0) * std::exp(-2.0 * k * k * lambda * lambda);
    p += term;
    if (std::abs(term) < 1e-16) break;
  }
  return std::clamp(p, 0.0, 1.0);
}

std::vector<BlockRatio> iact_ratio_report(const ChainDraws& a, const ChainDraws& b,
                                          const std::vector<Block>& blocks, IactMethod method) {
  std::vector<BlockRatio> out;
  for (Block blk : blocks) {
    const Mat ma = a.matrix(blk), mb = b.matrix(blk);
    if (ma.cols() != mb.cols())
      throw std::invalid_argument("block " + block_name(blk) + " has " +
                                  std::to_string(ma.cols()) + " parameters in one run and " +
                                  std::to_string(mb.cols()) + " in the other");
    BlockRatio r;
    r.block = block_name(blk);
    r.seconds_per_iter_a = a.seconds_per_iteration();
    r.seconds_per_iter_b = b.seconds_per_iteration();
    std::vector<double> ok, ia_all, ib_all;
    for (int p = 0; p < ma.cols(); ++p) {
      std::vector<double> sa(ma.col(p).data(), ma.col(p).data() + ma.rows());
      std::vector<double> sb(mb.col(p).data(), mb.col(p).data() + mb.rows());
      double ia, ib;
      try {
        ia = iact(sa, method);
        ib = iact(sb, method);
      } catch (const std::invalid_argument&) {
        r.ratios.push_back(std::numeric_limits<double>::quiet_NaN());
        ++r.n_skipped;
        continue;
      }
      r.ratios.push_back(ia / ib);
      ok.push_back(ia / ib);
      ia_all.push_back(ia);
      ib_all.push_back(ib);
    }
    r.n_params = static_cast<int>(ok.size());
    if (!ok.empty()) {
      const double n = static_cast<double>(ok.size());
      r.mean_iact_a = std::accumulate(ia_all.begin(), ia_all.end(), 0.0) / n;
      r.mean_iact_b = std::accumulate(ib_all.begin(), ib_all.end(), 0.0) / n;
      r.ratio_min = *std::min_element(ok.begin(), ok.end());
      r.ratio_max = *std::max_element(ok.begin(), ok.end());
      r.ratio_mean = std::accumulate(ok.begin(), ok.end(), 0.0) / n;
      r.ratio_median = quantile(ok, 0.5);
    }
    out.push_back(std::move(r));
  }
  return out;
}

std::string ratio_report_text(const std::vector<BlockRatio>& report) {
  std::ostringstream os;
  os << std::left << std::setw(18) << "block" << std::right << std::setw(8) << "n"
     << std::setw(12) << "iact_a" << std::setw(12) << "iact_b" << std::setw(10) << "min"
     << std::setw(10) << "median" << std::setw(10) << "mean" << std::setw(10) << "max"
     << std::setw(12) << "s/iter_a" << std::setw(12) << "s/iter_b" << "\n";
  os << std::fixed;
  for (const auto& r : report) {
    os << std::left << std::setw(18) << r.block << std::right << std::setw(8) << r.n_params
       << std::setprecision(3) << std::setw(12) << r.mean_iact_a << std::setw(12) << r.mean_iact_b
       << std::setw(10) << r.ratio_min << std::setw(10) << r.ratio_median << std::setw(10)
       << r.ratio_mean << std::setw(10) << r.ratio_max << std::setprecision(6) << std::setw(12)
       << r.seconds_per_iter_a << std::setw(12) << r.seconds_per_iter_b << "\n";
  }
  return os.str();
}

std::string ratio_report_csv(const std::vector<BlockRatio>& report) {
  std::ostringstream os;
  os << "block,n_params,n_skipped,mean_iact_a,mean_iact_b,ratio_min,ratio_median,ratio_mean,"
        "ratio_max,seconds_per_iter_a,seconds_per_iter_b\n";
  for (const auto& r : report)
    os << r.block << ',' << r.n_params << ',' << r.n_skipped << ',' << fmt(r.mean_iact_a) << ','
       << fmt(r.mean_iact_b) << ',' << fmt(r.ratio_min) << ',' << fmt(r.ratio_median) << ','
       << fmt(r.ratio_mean) << ',' << fmt(r.ratio_max) << ',' << fmt(r.seconds_per_iter_a) << ','
       << fmt(r.seconds_per_iter_b) << '\n';
  return os.str();
}

std::vector<ParameterSummary> summarize_draws(const ChainDraws& draws,
                                              const std::vector<Block>& blocks,
                                              IactMethod method) {
  std::vector<ParameterSummary> rows;
  for (Block b : blocks) {
    const Mat m = draws.matrix(b);
    if (m.rows() == 0) continue;
    const auto names = draws.column_names(b);
    for (int p = 0; p < m.cols(); ++p) {
      std::vector<double> s(m.col(p).data(), m.col(p).data() + m.rows());
      rows.push_back({block_name(b), p < static_cast<int>(names.size()) ? names[p] : "", summarize(s, method)});
    }
  }
  return rows;
}

std::string summary_text(const std::vector<ParameterSummary>& rows) {
  std::size_t w = 10;
  for (const auto& r : rows) w = std::max(w, r.name.size() + 2);
  std::ostringstream os;
  os << std::left << std::setw(static_cast<int>(w)) << "parameter" << std::right;
  for (const char* h : {"mean", "sd", "q2.5", "median", "q97.5", "iact", "ess"})
    os << std::setw(12) << h;
  os << "\n" << std::fixed << std::setprecision(4);
  for (const auto& r : rows)
    os << std::left << std::setw(static_cast<int>(w)) << r.name << std::right << std::setw(12)
       << r.s.mean << std::setw(12) << r.s.sd << std::setw(12) << r.s.lower << std::setw(12)
       << r.s.median << std::setw(12) << r.s.upper << std::setw(12) << r.s.iact << std::setw(12)
       << r.s.ess << "\n";
  return os.str();
}

std::string summary_csv(const std::vector<ParameterSummary>& rows) {
  std::ostringstream os;
  os << "block,parameter,mean,sd,q2.5,median,q97.5,iact,ess\n";
  for (const auto& r : rows)
    os << r.block << ',' << r.name << ',' << fmt(r.s.mean) << ',' << fmt(r.s.sd) << ','
       << fmt(r.s.lower) << ',' << fmt(r.s.median) << ',' << fmt(r.s.upper) << ','
       << fmt(r.s.iact) << ',' << fmt(r.s.ess) << '\n';
  return os.str();
}

}  // namespace mvp
