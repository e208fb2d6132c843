#include "mvp/predict.hpp"

#include "mvp/samplers.hpp"

#include <algorithm>
#include <iomanip>
#include <set>
#include <sstream>

namespace mvp {

std::string PredictiveEvent::name() const {
  std::ostringstream os;
  os << "P(";
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    if (kind == Kind::AtLeastOne) {
      if (i) os << '+';
      os << 'y' << outcomes[i] + 1;
    } else {
      if (i) os << ',';
      os << 'y' << outcomes[i] + 1 << "=1";
    }
  }
  if (kind == Kind::AtLeastOne) os << ">=1";
  os << ')';
  return os.str();
}

void PredictiveEvent::validate(int n_outcomes) const {
  if (outcomes.empty()) throw std::invalid_argument("event needs at least one outcome");
  if (kind == Kind::Single && outcomes.size() != 1)
    throw std::invalid_argument("single-outcome event takes exactly one outcome");
  std::set<int> seen;
  for (int d : outcomes) {
    if (d < 0 || d >= n_outcomes)
      throw std::invalid_argument("outcome " + std::to_string(d + 1) + " is out of range");
    if (!seen.insert(d).second) throw std::invalid_argument("outcome listed twice in event");
  }
}

double event_probability_mc(const Vec& mu, const Mat& corr, const PredictiveEvent& event, int n_mc,
                            Rng& rng) {
  if (n_mc < 1) throw std::invalid_argument("n_mc must be >= 1");
  const Mat l = Eigen::LLT<Mat>(corr).matrixL();
  const int d = static_cast<int>(mu.size());
  int hits = 0;
  for (int s = 0; s < n_mc; ++s) {
    const Vec y = mu + l * std_normal_vec(d, rng);
    bool any = false, all = true;
    for (int o : event.outcomes) {
      const bool pos = y[o] > 0;
      any = any || pos;
      all = all && pos;
    }
    if (event.kind == PredictiveEvent::Kind::All ? all : any) ++hits;
  }
  return static_cast<double>(hits) / n_mc;
}

namespace {

double quantile_sorted(const std::vector<double>& v, double p) {
  const double h = (v.size() - 1) * p;
  const auto lo = static_cast<std::size_t>(h);
  const std::size_t hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (h - lo) * (v[hi] - v[lo]);
}

}  // namespace

PredictiveSummary posterior_predictive(const ChainDraws& draws, const Vec& x_new,
                                       const PredictiveEvent& event, int n_mc, Rng& rng) {
  return posterior_predictive(draws, Mat(x_new.transpose()), event, n_mc, rng);
}

PredictiveSummary posterior_predictive(const ChainDraws& draws, const Mat& x_rows,
                                       const PredictiveEvent& event, int n_mc, Rng& rng) {
  if (n_mc < 1) throw std::invalid_argument("n_mc must be >= 1");
  const int d = draws.n_outcomes;
  const int k = draws.coef_per_outcome;
  event.validate(d);
  if (x_rows.cols() != k)
    throw std::invalid_argument("covariate vector has " + std::to_string(x_rows.cols()) +
                                " entries, model has " + std::to_string(k));
  if (draws.size() == 0) throw std::invalid_argument("no posterior draws");
  if (draws.alpha.size() != draws.size())
    throw std::invalid_argument("draws do not include random effects (store_alpha was off)");
  const int n_draws = static_cast<int>(draws.size());
  const int p = draws.n_individuals;
  if (x_rows.rows() != 1 && x_rows.rows() != p)
    throw std::invalid_argument("covariates need one row or one row per individual");

  PredictiveSummary out;
  out.column = event.name();
  out.probability.resize(n_draws, p);
  for (int s = 0; s < n_draws; ++s) {
    const Mat b = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
        draws.beta[s].data(), d, k);
    const Mat fixed = b * x_rows.transpose();  // D x (1 or P)
    const Mat r = symmetric_from_vechl(draws.corr_r[s], d, 1.0);
    for (int i = 0; i < p; ++i) {
      const Vec mu = fixed.col(fixed.cols() == 1 ? 0 : i) + draws.alpha[s].segment(i * d, d);
      out.probability(s, i) = event.kind == PredictiveEvent::Kind::Single
                                  ? norm_cdf(mu[event.outcomes[0]])
                                  : event_probability_mc(mu, r, event, n_mc, rng);
    }
  }
  out.mean.resize(p);
  out.median.resize(p);
  out.lower.resize(p);
  out.upper.resize(p);
  for (int i = 0; i < p; ++i) {
    std::vector<double> col(out.probability.col(i).data(), out.probability.col(i).data() + n_draws);
    std::sort(col.begin(), col.end());
    out.mean[i] = out.probability.col(i).mean();
    out.median[i] = quantile_sorted(col, 0.5);
    out.lower[i] = quantile_sorted(col, 0.025);
    out.upper[i] = quantile_sorted(col, 0.975);
  }
  return out;
}

std::string predictive_to_csv(const std::vector<PredictiveSummary>& columns) {
  auto cell = [](const std::string& name) {
    return name.find(',') == std::string::npos ? name : "\"" + name + "\"";
  };
  std::ostringstream os;
  os << std::setprecision(17) << "individual";
  // The bare event name holds the posterior median.
  for (const auto& c : columns)
    os << ',' << cell(c.column) << ',' << cell(c.column + " q2.5") << ','
       << cell(c.column + " q97.5") << ',' << cell(c.column + " mean");
  os << '\n';
  const int p = columns.empty() ? 0 : static_cast<int>(columns.front().mean.size());
  for (int i = 0; i < p; ++i) {
    os << i + 1;
    for (const auto& c : columns)
      os << ',' << c.median[i] << ',' << c.lower[i] << ',' << c.upper[i] << ',' << c.mean[i];
    os << '\n';
  }
  return os.str();
}

}  // namespace mvp
