#include "mvp/examples.hpp"

#include "mvp/corr_repar.hpp"
#include "mvp/diagnostics.hpp"
#include "mvp/priors.hpp"

#include <boost/math/distributions/beta.hpp>

#include <cmath>
#include <iomanip>
#include <sstream>

namespace mvp {

void BivariateGibbsConfig::validate() const {
  if (!(std::abs(rho) < 1.0)) throw std::invalid_argument("rho must lie in (-1, 1)");
  if (iterations < 1) throw std::invalid_argument("iterations must be positive");
  mvp::validate(margin1);
  mvp::validate(margin2);
  if (is_deterministic(margin1) && is_deterministic(margin2))
    throw std::invalid_argument(
        "both margins deterministic: the chain is not ergodic; make at least one stochastic");
}

Mat run_bivariate_gibbs(const BivariateGibbsConfig& cfg) {
  cfg.validate();
  Rng rng = make_rng(cfg.seed, 0);
  const double var = 1.0 - cfg.rho * cfg.rho;
  Eigen::LLT<Mat> prec(Mat::Constant(1, 1, 1.0 / var));
  Vec a(1), b(1), m(1);
  a[0] = cfg.start1;
  b[0] = cfg.start2;
  Mat out(cfg.iterations, 2);
  for (int it = 0; it < cfg.iterations; ++it) {
    m[0] = cfg.rho * b[0];
    a = gaussian_block_move(a, m, prec, cfg.margin1, rng);
    m[0] = cfg.rho * a[0];
    b = gaussian_block_move(b, m, prec, cfg.margin2, rng);
    out(it, 0) = a[0];
    out(it, 1) = b[0];
  }
  return out;
}

double pearson(const Eigen::Ref<const Vec>& a, const Eigen::Ref<const Vec>& b) {
  if (a.size() != b.size() || a.size() < 2) throw std::invalid_argument("pearson: bad lengths");
  const Vec ca = a.array() - a.mean();
  const Vec cb = b.array() - b.mean();
  return ca.dot(cb) / std::sqrt(ca.squaredNorm() * cb.squaredNorm());
}

PriorStudy run_prior_study(const PriorStudyConfig& cfg) {
  if (cfg.dim < 2) throw std::invalid_argument("prior study needs dim >= 2");
  if (cfg.draws < 2) throw std::invalid_argument("prior study needs at least 2 draws");
  Rng rng = make_rng(cfg.seed, 0);
  const int m = vechl_size(cfg.dim);
  PriorStudy s;
  s.dim = cfg.dim;
  s.corr.resize(cfg.draws, m);
  s.partial.resize(cfg.draws, m);
  for (int i = 0; i < cfg.draws; ++i) {
    const CorrelationMatrix r = sample_corr_marg_uniform(cfg.dim, cfg.nu, rng);
    s.corr.row(i) = vechl(r.values()).transpose();
    s.partial.row(i) = vechl(corr_to_partial(r)).transpose();
  }
  return s;
}

std::vector<std::string> PriorStudy::names(const std::string& prefix) const {
  std::vector<std::string> out;
  for (int i = 1; i < dim; ++i)
    for (int j = 0; j < i; ++j)
      out.push_back(prefix + "_" + std::to_string(i + 1) + "_" + std::to_string(j + 1));
  return out;
}

namespace {

std::vector<double> column(const Mat& m, int c) {
  return std::vector<double>(m.col(c).data(), m.col(c).data() + m.rows());
}

}  // namespace

std::vector<double> PriorStudy::corr_uniform_pvalues() const {
  std::vector<double> p;
  for (int c = 0; c < corr.cols(); ++c) {
    const double d = ks_distance(column(corr, c), [](double x) { return std::clamp(0.5 * (x + 1.0), 0.0, 1.0); });
    p.push_back(kolmogorov_pvalue(d, static_cast<double>(corr.rows())));
  }
  return p;
}

std::vector<double> PriorStudy::partial_beta_pvalues() const {
  const boost::math::beta_distribution<double> beta(0.5 * dim, 0.5 * dim);
  std::vector<double> p;
  for (int c = 0; c < partial.cols(); ++c) {
    const double d = ks_distance(column(partial, c), [&](double x) {
      return boost::math::cdf(beta, std::clamp(0.5 * (x + 1.0), 0.0, 1.0));
    });
    p.push_back(kolmogorov_pvalue(d, static_cast<double>(partial.rows())));
  }
  return p;
}

std::vector<PriorStudy::Pair> PriorStudy::shared_index_abs_dependence() const {
  const auto nm = names("r");
  std::vector<std::pair<int, int>> idx;
  for (int i = 1; i < dim; ++i)
    for (int j = 0; j < i; ++j) idx.emplace_back(i, j);
  std::vector<Pair> out;
  for (std::size_t a = 0; a < idx.size(); ++a)
    for (std::size_t b = a + 1; b < idx.size(); ++b) {
      const auto [i1, j1] = idx[a];
      const auto [i2, j2] = idx[b];
      if (i1 != i2 && i1 != j2 && j1 != i2 && j1 != j2) continue;
      out.push_back({nm[a], nm[b],
                     pearson(corr.col(static_cast<int>(a)).cwiseAbs(),
                             corr.col(static_cast<int>(b)).cwiseAbs())});
    }
  return out;
}

std::vector<PriorStudy::Pair> PriorStudy::partial_pairwise_correlation() const {
  const auto nm = names("rho");
  std::vector<Pair> out;
  for (int a = 0; a < partial.cols(); ++a)
    for (int b = a + 1; b < partial.cols(); ++b)
      out.push_back({nm[a], nm[b], pearson(partial.col(a), partial.col(b))});
  return out;
}

std::string prior_study_summary_csv(const PriorStudy& s) {
  std::ostringstream os;
  os << std::setprecision(17) << "kind,a,b,value\n";
  const auto rn = s.names("r"), pn = s.names("rho");
  const auto pu = s.corr_uniform_pvalues(), pb = s.partial_beta_pvalues();
  for (std::size_t i = 0; i < rn.size(); ++i) os << "ks_uniform_pvalue," << rn[i] << ",," << pu[i] << "\n";
  for (std::size_t i = 0; i < pn.size(); ++i) os << "ks_beta_pvalue," << pn[i] << ",," << pb[i] << "\n";
  for (const auto& p : s.shared_index_abs_dependence())
    os << "abs_corr_dependence," << p.a << "," << p.b << "," << p.correlation << "\n";
  for (const auto& p : s.partial_pairwise_correlation())
    os << "partial_correlation," << p.a << "," << p.b << "," << p.correlation << "\n";
  return os.str();
}

std::string prior_study_draws_csv(const Mat& draws, const std::vector<std::string>& names) {
  std::ostringstream os;
  os << std::setprecision(17);
  for (std::size_t i = 0; i < names.size(); ++i) os << (i ? "," : "") << names[i];
  os << "\n";
  for (int r = 0; r < draws.rows(); ++r) {
    for (int c = 0; c < draws.cols(); ++c) os << (c ? "," : "") << draws(r, c);
    os << "\n";
  }
  return os.str();
}

}  // namespace mvp
