#include "mvp/simulate.hpp"

#include "mvp/corr_repar.hpp"

#include <json.hpp>

#include <stdexcept>

namespace mvp {

void TrueParams::validate() const {
  const int d = dim();
  if (d < 1 || beta.cols() < 1) throw std::invalid_argument("truth: beta must be D x K with D, K >= 1");
  if (!beta.allFinite()) throw std::invalid_argument("truth: beta must be finite");
  if (gamma.size() > 0 && (gamma.rows() != d || !gamma.allFinite()))
    throw std::invalid_argument("truth: gamma must be finite with D rows");
  if (corr.rows() != d) throw std::invalid_argument("truth: correlation matrix must be D x D");
  CorrelationMatrix check(corr);
  if (sigma_alpha.rows() != d || sigma_alpha.cols() != d)
    throw std::invalid_argument("truth: Sigma_alpha must be D x D");
  if (!sigma_alpha.isZero(0.0)) CovarianceMatrix cov_check(sigma_alpha);
}

CovariateGenerator CovariateGenerator::design(CodebookSpec codebook) {
  codebook.validate();
  CovariateGenerator g;
  g.kind = Kind::Design;
  g.codebook = std::move(codebook);
  return g;
}

CovariateGenerator CovariateGenerator::gaussian(int n_covariates, double scale) {
  if (n_covariates < 1) throw std::invalid_argument("need at least the constant covariate");
  CovariateGenerator g;
  g.kind = Kind::Gaussian;
  g.n_covariates = n_covariates;
  g.scale = scale;
  return g;
}

int CovariateGenerator::width() const {
  return kind == Kind::Design ? static_cast<int>(codebook.covariate_names().size()) : n_covariates;
}

std::vector<std::string> CovariateGenerator::names() const {
  if (kind == Kind::Design) return codebook.covariate_names();
  std::vector<std::string> n{"intercept"};
  for (int k = 1; k < n_covariates; ++k) n.push_back("x" + std::to_string(k));
  return n;
}

Mat CovariateGenerator::draw(int rows, Rng& rng) const {
  Mat x = Mat::Zero(rows, width());
  x.col(0).setOnes();
  if (kind == Kind::Gaussian) {
    for (int r = 0; r < rows; ++r)
      for (int k = 1; k < n_covariates; ++k) x(r, k) = scale * std_normal(rng);
    return x;
  }
  for (const auto& n : codebook.numeric)
    if (!n.individual_level)
      throw std::invalid_argument("design generator supports categorical attributes only");
  for (int r = 0; r < rows; ++r) {
    int col = 1;
    for (const auto& attr : codebook.categorical) {
      const int n_levels = static_cast<int>(attr.levels.size());
      const int pick = std::uniform_int_distribution<int>(0, n_levels - 1)(rng);
      int offset = 0;
      for (int l = 0; l < n_levels; ++l) {
        if (attr.levels[l] == attr.base) continue;
        if (l == pick) x(r, col + offset) = 1.0;
        ++offset;
      }
      col += n_levels - 1;
    }
  }
  return x;
}

Mat IndividualGenerator::draw(int individuals, Rng& rng) const {
  const int g = static_cast<int>(names.size());
  Mat z(individuals, g);
  for (int i = 0; i < individuals; ++i)
    for (int j = 0; j < g; ++j)
      z(i, j) = binary[j] ? (uniform01(rng) < 0.5 ? 1.0 : 0.0) : std_normal(rng);
  return z;
}

SimulatedPanel simulate_panel(const TrueParams& truth, int individuals, int periods,
                              const CovariateGenerator& covariates, std::uint64_t seed,
                              const IndividualGenerator& individual) {
  truth.validate();
  if (individuals < 1 || periods < 1) throw std::invalid_argument("P and T must be >= 1");
  if (covariates.width() != truth.beta.cols())
    throw std::invalid_argument("covariate generator width differs from beta columns");
  const int g = static_cast<int>(individual.names.size());
  if (g != truth.gamma.cols() || individual.binary.size() != individual.names.size())
    throw std::invalid_argument("individual covariates do not match gamma");
  const int d = truth.dim();

  Rng rng = make_rng(seed, 0);
  SimulatedPanel sim;
  sim.truth = truth;
  PanelData& data = sim.data;
  data.n_outcomes = d;
  data.n_individuals = individuals;
  data.n_periods = periods;
  data.x = covariates.draw(individuals * periods, rng);
  data.covariate_labels = covariates.names();
  for (int k = 0; k < d; ++k) data.outcome_labels.push_back("y" + std::to_string(k + 1));
  if (g > 0) {
    data.z = individual.draw(individuals, rng);
    data.individual_labels = individual.names;
  }

  const Mat l_eps = Eigen::LLT<Mat>(truth.corr).matrixL();
  Mat l_alpha = Mat::Zero(d, d);
  if (!truth.sigma_alpha.isZero(0.0)) l_alpha = Eigen::LLT<Mat>(truth.sigma_alpha).matrixL();

  sim.alpha.resize(d, individuals);
  for (int i = 0; i < individuals; ++i) sim.alpha.col(i) = l_alpha * std_normal_vec(d, rng);
  sim.ystar.resize(d, data.n_obs());
  data.y.assign(static_cast<std::size_t>(data.n_obs()) * d, 0);
  for (int i = 0; i < individuals; ++i) {
    Vec fixed_i = sim.alpha.col(i);
    if (g > 0) fixed_i += truth.gamma * data.z.row(i).transpose();
    for (int t = 0; t < periods; ++t) {
      const int r = data.row(i, t);
      const Vec ys = fixed_i + truth.beta * data.x.row(r).transpose() + l_eps * std_normal_vec(d, rng);
      sim.ystar.col(r) = ys;
      for (int k = 0; k < d; ++k) data.y[static_cast<std::size_t>(r) * d + k] = ys[k] > 0 ? 1 : 0;
    }
  }
  data.validate();
  return sim;
}

namespace {

TrueParams from_set(const ModelParameterSet& m) {
  TrueParams t;
  t.beta = m.beta;
  t.gamma = m.gamma;
  t.corr = m.corr;
  t.sigma_alpha = m.sigma_alpha;
  return t;
}

nlohmann::json matrix_json(const Mat& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (int i = 0; i < m.rows(); ++i) {
    std::vector<double> r(m.cols());
    for (int j = 0; j < m.cols(); ++j) r[j] = m(i, j);
    rows.push_back(r);
  }
  return rows;
}

}  // namespace

TrueParams reference_truth_model1() { return from_set(reference_parameter_set().model1); }
TrueParams reference_truth_model2() { return from_set(reference_parameter_set().model2); }

std::string truth_to_json(const SimulatedPanel& sim) {
  nlohmann::json j;
  j["beta"] = matrix_json(sim.truth.beta);
  if (sim.truth.gamma.size() > 0) j["gamma"] = matrix_json(sim.truth.gamma);
  j["corr"] = matrix_json(sim.truth.corr);
  j["sigma_alpha"] = matrix_json(sim.truth.sigma_alpha);
  j["alpha"] = matrix_json(sim.alpha.transpose());
  j["covariate_labels"] = sim.data.covariate_labels;
  j["outcome_labels"] = sim.data.outcome_labels;
  // nlohmann prints doubles with max_digits10 (17) by default.
  return j.dump(2) + "\n";
}

}  // namespace mvp
