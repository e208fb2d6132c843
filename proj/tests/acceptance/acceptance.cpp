// Acceptance runner: one PASS/FAIL line per criterion. Thresholds are fixed
// here; a failing criterion is reported, never relaxed.
//
//   acceptance                 run every criterion
//   acceptance --criterion 7   run one

#include "mvp/corr_repar.hpp"
#include "mvp/diagnostics.hpp"
#include "mvp/examples.hpp"
#include "mvp/geweke.hpp"
#include "mvp/gibbs.hpp"
#include "mvp/reference_params.hpp"
#include "mvp/priors.hpp"
#include "mvp/samplers.hpp"
#include "mvp/simulate.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <numeric>
#include <random>
#include <array>
#include <iostream>
#include <numbers>
#include <sstream>
#include <vector>

using namespace mvp;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(double v, int prec = 4) {
  std::ostringstream os;
  os << std::setprecision(prec) << v;
  return os.str();
}

double median(std::vector<double> v) { return quantile(std::move(v), 0.5); }

// ------------------------------------------------------------------ 1

Outcome criterion1() {
  Rng rng = make_rng(101);
  double worst_round = 0.0, worst_jac = 0.0;
  for (int c = 0; c < 100; ++c) {
    const int d = 2 + c % 5;
    const int n = vechl_size(d);
    Vec e(n);
    for (int i = 0; i < n; ++i) e[i] = std_normal(rng);
    const UnitCholesky l(d, e);
    const CorrelationMatrix r = cholesky_to_corr(l);
    const UnitCholesky back = corr_to_cholesky(r);
    worst_round = std::max(worst_round, (back.entries() - e).cwiseAbs().maxCoeff());
    worst_round = std::max(worst_round,
                           (cholesky_to_corr(back).values() - r.values()).cwiseAbs().maxCoeff());

    // Central differences of vechL(L) -> vechL(R).
    const double h = 1e-5;
    Mat jac(n, n);
    for (int k = 0; k < n; ++k) {
      Vec ep = e, em = e;
      ep[k] += h;
      em[k] -= h;
      jac.col(k) = (vechl(cholesky_to_corr(UnitCholesky(d, ep)).values()) -
                    vechl(cholesky_to_corr(UnitCholesky(d, em)).values())) /
                   (2 * h);
    }
    const double fd = std::abs(jac.determinant());
    const double closed = std::exp(log_jacobian(l));
    worst_jac = std::max(worst_jac, std::abs(fd - closed) / closed);
  }
  return {worst_round < 1e-10 && worst_jac < 1e-6,
          "max round-trip error " + fmt(worst_round) + ", max Jacobian rel. error " + fmt(worst_jac)};
}

// ------------------------------------------------------------------ 2

Outcome criterion2() {
  Rng rng = make_rng(202);
  double worst = 0.0;
  for (int c = 0; c < 50; ++c) {
    const int d = 2 + c % 5;
    const int n = vechl_size(d);
    Vec e(n);
    for (int i = 0; i < n; ++i) e[i] = 0.7 * std_normal(rng);
    Mat resid(d, 15 + c);
    for (int j = 0; j < resid.cols(); ++j) resid.col(j) = std_normal_vec(d, rng);
    const ResidualScatter s = ResidualScatter::from_residuals(resid);
    const double nu = d + 1.0 + (c % 3);
    const Vec g = grad_log_target_cholesky(UnitCholesky(d, e), s, nu);
    for (int k = 0; k < n; ++k) {
      const double h = 1e-5 * std::max(1.0, std::abs(e[k]));
      Vec ep = e, em = e;
      ep[k] += h;
      em[k] -= h;
      const double fd = (log_target_cholesky(UnitCholesky(d, ep), s, nu) -
                         log_target_cholesky(UnitCholesky(d, em), s, nu)) /
                        (2 * h);
      // Relative to the component, with a unit floor so near-zero partials
      // are judged on absolute error.
      worst = std::max(worst, std::abs(g[k] - fd) / std::max(1.0, std::abs(fd)));
    }
  }
  return {worst < 1e-5, "max componentwise rel. error " + fmt(worst)};
}

// ------------------------------------------------------------------ 3

Outcome criterion3() {
  PriorStudyConfig cfg;
  cfg.dim = 4;
  cfg.nu = 5.0;
  cfg.draws = 100000;
  cfg.seed = 303;
  const PriorStudy st = run_prior_study(cfg);
  const auto pu = st.corr_uniform_pvalues();
  const auto pb = st.partial_beta_pvalues();
  const double min_pu = *std::min_element(pu.begin(), pu.end());
  const double min_pb = *std::min_element(pb.begin(), pb.end());
  double min_dep = 1.0, max_partial = 0.0;
  for (const auto& p : st.shared_index_abs_dependence()) min_dep = std::min(min_dep, p.correlation);
  for (const auto& p : st.partial_pairwise_correlation())
    max_partial = std::max(max_partial, std::abs(p.correlation));
  const bool pass = min_pu > 0.01 && min_pb > 0.01 && min_dep > 0.0 && max_partial <= 0.01;
  return {pass, "min KS p uniform " + fmt(min_pu) + ", min KS p beta " + fmt(min_pb) +
                    ", min shared-index |r| corr " + fmt(min_dep) + ", max |partial corr| " +
                    fmt(max_partial)};
}

// ------------------------------------------------------------------ 4

Outcome criterion4() {
  Rng rng = make_rng(404);
  const int d = 3;
  Mat a(d, d);
  a << 2.0, 0.6, -0.3, 0.6, 1.5, 0.4, -0.3, 0.4, 1.0;  // precision
  const Vec mu = (Vec(d) << 0.5, -1.0, 2.0).finished();
  const Eigen::LLT<Mat> llt(a);
  const Mat sigma = spd_inverse(a);

  double inv_err = 0.0, or_err = 0.0, hmc_err = 0.0;
  for (int rep = 0; rep < 1000; ++rep) {
    const Vec th = mu + 3.0 * std_normal_vec(d, rng);
    const Vec once = gaussian_block_move(th, mu, llt, proposal::Antithetic{}, rng);
    const Vec twice = gaussian_block_move(once, mu, llt, proposal::Antithetic{}, rng);
    inv_err = std::max(inv_err, (twice - th).cwiseAbs().maxCoeff());
    for (int i = 0; i < d; ++i) {
      const double s = std::sqrt(sigma(i, i));
      or_err = std::max(or_err, std::abs(over_relax_step(th[i], mu[i], s, 1.0, rng) - (2 * mu[i] - th[i])));
    }
    const Vec h = exact_gauss_hmc(th, std_normal_vec(d, rng), std::numbers::pi, mu, sigma);
    hmc_err = std::max(hmc_err, (h - antithetic_step(th, mu)).cwiseAbs().maxCoeff());
  }

  // t = pi / 2 on 1e5 sweeps: first and second moments of each coordinate.
  const int n = 100000;
  Vec th = mu;
  Vec s1 = Vec::Zero(d), s2 = Vec::Zero(d), s4 = Vec::Zero(d);
  for (int it = 0; it < n; ++it) {
    th = gaussian_block_move(th, mu, llt, proposal::ExactGaussHmc{std::numbers::pi / 2}, rng);
    const Vec c = th - mu;
    s1 += c;
    s2 += c.cwiseProduct(c);
    s4 += c.cwiseProduct(c).cwiseProduct(c).cwiseProduct(c);
  }
  double worst_z = 0.0;
  for (int i = 0; i < d; ++i) {
    const double v = sigma(i, i);
    const double mean_se = std::sqrt(v / n);
    const double var_hat = s2[i] / n;
    const double var_se = std::sqrt((s4[i] / n - var_hat * var_hat) / n);
    worst_z = std::max({worst_z, std::abs(s1[i] / n) / mean_se, std::abs(var_hat - v) / var_se});
  }
  const double tol = 1e-12;
  const bool pass = inv_err <= tol && or_err == 0.0 && hmc_err <= tol && worst_z < 3.0;
  return {pass, "involution err " + fmt(inv_err) + ", OR(1) vs antithetic err " + fmt(or_err) +
                    ", HMC(pi) vs antithetic err " + fmt(hmc_err) + ", HMC(pi/2) max |z| " +
                    fmt(worst_z)};
}

// ------------------------------------------------------------------ 5

Outcome criterion5() {
  Rng rng = make_rng(505);
  const int n = 1000000;
  double m0 = 0.0, m6 = 0.0;
  for (int i = 0; i < n; ++i) m0 += sample_truncated_normal(0, 1, 0, kInf, rng);
  for (int i = 0; i < n; ++i) m6 += sample_truncated_normal(0, 1, 6, kInf, rng);
  m0 /= n;
  m6 /= n;
  const bool pass = std::abs(m0 - 0.79788) <= 0.003 && std::abs(m6 - 6.1586) / 6.1586 <= 0.01;
  return {pass, "half-normal mean " + fmt(m0, 6) + ", tail(6) mean " + fmt(m6, 6)};
}

// ------------------------------------------------------------------ 6

Outcome criterion6() {
  const std::vector<std::pair<std::string, ProposalMode>> modes = {
      {"independent", proposal::Independent{}},
      {"antithetic", proposal::Antithetic{}},
      {"overrelax:0.5", proposal::OverRelax{0.5}},
      {"hmc:2", proposal::ExactGaussHmc{2.0}}};
  double worst = 0.0;
  std::string worst_case;
  for (BetaPriorKind b : {BetaPriorKind::Normal, BetaPriorKind::Horseshoe})
    for (SigmaAlphaPriorKind s : {SigmaAlphaPriorKind::InverseWishart, SigmaAlphaPriorKind::Hierarchical})
      for (const auto& [name, mode] : modes) {
        GewekeConfig cfg = GewekeConfig::small(b, s);
        cfg.beta_mode = mode;
        cfg.alpha_mode = mode;
        cfg.sweeps = 200000;
        cfg.prior_draws = 200000;
        cfg.seed = 606;
        const GewekeResult r = geweke_joint_test(cfg);
        if (r.max_abs_z > worst) {
          worst = r.max_abs_z;
          worst_case = std::string(b == BetaPriorKind::Normal ? "normal" : "horseshoe") + "/" +
                       (s == SigmaAlphaPriorKind::InverseWishart ? "iw" : "hiw") + "/" + name + " " +
                       r.worst;
        }
      }
  GewekeConfig mutant = GewekeConfig::small(BetaPriorKind::Normal, SigmaAlphaPriorKind::InverseWishart);
  mutant.fault_alpha_variance_scale = 1.1;
  mutant.sweeps = 200000;
  mutant.prior_draws = 200000;
  mutant.seed = 606;
  const GewekeResult m = geweke_joint_test(mutant);
  return {worst < 4.0 && m.max_abs_z > 6.0,
          "max |z| " + fmt(worst) + " (" + worst_case + "), mutant max |z| " + fmt(m.max_abs_z)};
}

// ------------------------------------------------------------------ 7

Outcome criterion7() {
  auto run = [](ProposalMode a, ProposalMode b) {
    BivariateGibbsConfig cfg;
    cfg.rho = 0.99;
    cfg.iterations = 10000;
    cfg.margin1 = a;
    cfg.margin2 = b;
    cfg.seed = 707;
    const Mat m = run_bivariate_gibbs(cfg);
    std::vector<double> out;
    for (int j = 0; j < 2; ++j) {
      std::vector<double> col(m.rows());
      for (int i = 0; i < m.rows(); ++i) col[i] = m(i, j);
      out.push_back(iact(col, IactMethod::ArSpectral));
    }
    return out;
  };
  const auto ind = run(proposal::Independent{}, proposal::Independent{});
  const auto orx = run(proposal::OverRelax{0.9}, proposal::OverRelax{0.9});
  const auto cpl = run(proposal::OverRelax{0.9}, proposal::Antithetic{});
  bool pass = true;
  std::string detail;
  for (int j = 0; j < 2; ++j) {
    const double ratio = orx[j] / cpl[j];
    pass = pass && ratio >= 1.3 && ratio <= 2.3 && ind[j] >= 5 * orx[j] && ind[j] >= 5 * cpl[j];
    detail += "margin " + std::to_string(j + 1) + ": IACT ind " + fmt(ind[j]) + ", OR " + fmt(orx[j]) +
              ", coupled " + fmt(cpl[j]) + ", OR/coupled " + fmt(ratio) + (j == 0 ? "; " : "");
  }
  return {pass, detail};
}

// ------------------------------------------------------------------ 8

Outcome criterion8() {
  const auto& set = reference_parameter_set();
  const SimulatedPanel sim =
      simulate_panel(reference_truth_model1(), 40, 8, CovariateGenerator::design(set.codebook), 808);
  const ModelSpec spec = ModelSpec::for_data(sim.data, false);
  SamplerConfig sc;
  sc.burn_in = 1000;
  sc.iterations = 6000;  // 5000 kept
  sc.seed = 808;
  sc.beta_mode = proposal::Antithetic{};
  sc.alpha_mode = proposal::Antithetic{};
  const ChainDraws as = run_chain(sim.data, spec, sc);
  sc.beta_mode = proposal::Independent{};
  sc.alpha_mode = proposal::Independent{};
  sc.seed = 809;
  const ChainDraws is = run_chain(sim.data, spec, sc);

  const auto report = iact_ratio_report(is, as, {Block::Alpha, Block::Beta});
  const double r_alpha = report[0].ratio_mean, r_beta = report[1].ratio_mean;

  // Spot checks: every fifth alpha and beta coordinate.
  double worst_ks = 0.0;
  std::string worst_name;
  for (Block b : {Block::Alpha, Block::Beta}) {
    const int width = static_cast<int>(as.block(b).front().size());
    const auto names = as.column_names(b);
    for (int k = 0; k < width; k += 5) {
      const double ks = ks_distance(as.series(b, k), is.series(b, k));
      if (ks > worst_ks) {
        worst_ks = ks;
        worst_name = names[k] + " (IACT AS " + fmt(iact(as.series(b, k)), 3) + ", IS " +
                     fmt(iact(is.series(b, k)), 3) + ")";
      }
    }
  }
  const bool pass = r_alpha > 1.5 && r_beta > 1.5 && worst_ks < 0.05;
  return {pass, "mean IACT ratio IS/AS alpha " + fmt(r_alpha) + ", beta " + fmt(r_beta) +
                    " (full-scale reference 4.86 / 3.31), max spot-check KS " + fmt(worst_ks) +
                    " at " + worst_name};
}

// ------------------------------------------------------------- 9, 10, 11

constexpr int kStudyD = 3, kStudyP = 30, kStudyT = 8, kStudyK = 5;

SamplerConfig study_sampler(std::uint64_t seed) {
  SamplerConfig sc;
  sc.burn_in = 1000;
  sc.iterations = 6000;
  sc.seed = seed;
  sc.store_alpha = false;
  return sc;
}

// Posterior RMSE of every coefficient against the truth.
Vec coefficient_rmse(const ChainDraws& d, const Mat& beta) {
  Vec truth(beta.size());
  for (int r = 0; r < beta.rows(); ++r) truth.segment(r * beta.cols(), beta.cols()) = beta.row(r).transpose();
  return rmse(d.matrix(Block::Beta), truth);
}

Outcome criterion9() {
  std::vector<double> zero_ratio, nonzero_ratio;
  for (int rep = 0; rep < 50; ++rep) {
    Rng rng = make_rng(900 + rep, 1);
    TrueParams t;
    t.beta = Mat::Zero(kStudyD, kStudyK);
    // Intercepts are free; 9 of the 12 slopes are zero.
    std::vector<int> slots((kStudyK - 1) * kStudyD);
    std::iota(slots.begin(), slots.end(), 0);
    std::shuffle(slots.begin(), slots.end(), rng);
    for (int d = 0; d < kStudyD; ++d) t.beta(d, 0) = 0.3 * std_normal(rng);
    for (int s = 0; s < 3; ++s) {
      const int d = slots[s] / (kStudyK - 1), k = 1 + slots[s] % (kStudyK - 1);
      t.beta(d, k) = (uniform01(rng) < 0.5 ? -1.0 : 1.0) * (0.75 + 0.5 * uniform01(rng));
    }
    t.corr = sample_corr_marg_uniform(kStudyD, kStudyD + 1.0, rng).values();
    t.sigma_alpha = 0.5 * Mat::Identity(kStudyD, kStudyD);
    const SimulatedPanel sim =
        simulate_panel(t, kStudyP, kStudyT, CovariateGenerator::gaussian(kStudyK), 900 + rep);

    PriorSpec normal;
    PriorSpec hs;
    hs.beta = BetaPriorKind::Horseshoe;
    const Vec e_n = coefficient_rmse(
        run_chain(sim.data, ModelSpec::for_data(sim.data, false, normal), study_sampler(5000 + rep)), t.beta);
    const Vec e_h = coefficient_rmse(
        run_chain(sim.data, ModelSpec::for_data(sim.data, false, hs), study_sampler(5000 + rep)), t.beta);
    double zn = 0, zh = 0, nn = 0, nh = 0;
    for (int d = 0; d < kStudyD; ++d)
      for (int k = 1; k < kStudyK; ++k) {
        const int i = d * kStudyK + k;
        if (t.beta(d, k) == 0.0) {
          zn += e_n[i];
          zh += e_h[i];
        } else {
          nn += e_n[i];
          nh += e_h[i];
        }
      }
    zero_ratio.push_back(zh / zn);
    nonzero_ratio.push_back(nh / nn);
  }
  const double mz = median(zero_ratio), mn = median(nonzero_ratio);
  return {mz < 0.75 && mn >= 0.8 && mn <= 1.3,
          "median RMSE ratio horseshoe/normal: zeros " + fmt(mz) + ", non-zeros " + fmt(mn)};
}

struct CovSummaries {
  Vec sd, corr, partial;
};

CovSummaries cov_summaries(const Mat& s) {
  const Vec sd = s.diagonal().cwiseSqrt();
  const Mat r = sd.cwiseInverse().asDiagonal() * s * sd.cwiseInverse().asDiagonal();
  const Mat pinv = spd_inverse(s);
  const Vec pd = pinv.diagonal().cwiseSqrt().cwiseInverse();
  const Mat partial = -(pd.asDiagonal() * pinv * pd.asDiagonal());
  return {sd, vechl(r), vechl(partial)};
}

Outcome criterion10() {
  std::vector<double> sd_ratio, corr_ratio, partial_ratio;
  for (int rep = 0; rep < 50; ++rep) {
    Rng rng = make_rng(1000 + rep, 1);
    TrueParams t;
    t.beta = Mat::Zero(kStudyD, kStudyK);
    for (int i = 0; i < t.beta.size(); ++i) t.beta.data()[i] = 0.5 * std_normal(rng);
    t.corr = sample_corr_marg_uniform(kStudyD, kStudyD + 1.0, rng).values();
    // Random-effect covariance: standard deviations in [0.5, 1.2] and a
    // marginally uniform correlation.
    const Mat ra = sample_corr_marg_uniform(kStudyD, kStudyD + 1.0, rng).values();
    Vec sd(kStudyD);
    for (int d = 0; d < kStudyD; ++d) sd[d] = 0.5 + 0.7 * uniform01(rng);
    t.sigma_alpha = sd.asDiagonal() * ra * sd.asDiagonal();
    const SimulatedPanel sim =
        simulate_panel(t, kStudyP, kStudyT, CovariateGenerator::gaussian(kStudyK), 1000 + rep);
    const CovSummaries truth = cov_summaries(t.sigma_alpha);

    auto errors = [&](SigmaAlphaPriorKind kind) {
      PriorSpec p;
      p.sigma_alpha = kind;
      const ChainDraws d =
          run_chain(sim.data, ModelSpec::for_data(sim.data, false, p), study_sampler(6000 + rep));
      Vec e_sd = Vec::Zero(kStudyD), e_c = Vec::Zero(vechl_size(kStudyD)), e_p = e_c;
      for (const Vec& v : d.sigma_alpha) {
        const CovSummaries c = cov_summaries(symmetric_from_vech(v, kStudyD));
        e_sd += (c.sd - truth.sd).cwiseAbs2();
        e_c += (c.corr - truth.corr).cwiseAbs2();
        e_p += (c.partial - truth.partial).cwiseAbs2();
      }
      const double n = static_cast<double>(d.size());
      return std::array<double, 3>{(e_sd / n).cwiseSqrt().mean(), (e_c / n).cwiseSqrt().mean(),
                                   (e_p / n).cwiseSqrt().mean()};
    };
    const auto hiw = errors(SigmaAlphaPriorKind::Hierarchical);
    const auto iw = errors(SigmaAlphaPriorKind::InverseWishart);
    sd_ratio.push_back(hiw[0] / iw[0]);
    corr_ratio.push_back(hiw[1] / iw[1]);
    partial_ratio.push_back(hiw[2] / iw[2]);
  }
  const double a = median(sd_ratio), b = median(corr_ratio), c = median(partial_ratio);
  auto in = [](double v) { return v >= 0.85 && v <= 1.15; };
  return {in(a) && in(b) && in(c), "median RMSE ratio HIW/IW: sd " + fmt(a) + ", correlation " +
                                       fmt(b) + ", partial correlation " + fmt(c)};
}

Outcome criterion11() {
  // Survey-shaped data from the shipped parameter set, desk scale.
  const auto& set = reference_parameter_set();
  const SimulatedPanel sim =
      simulate_panel(reference_truth_model1(), 40, 8, CovariateGenerator::design(set.codebook), 1111);
  PriorSpec p;
  p.sigma_alpha = SigmaAlphaPriorKind::Hierarchical;
  const ModelSpec spec = ModelSpec::for_data(sim.data, false, p);
  SamplerConfig sc = study_sampler(1111);
  sc.burn_in = 1000;
  sc.iterations = 6000;
  const ChainDraws hmc = run_chain(sim.data, spec, sc);
  sc.hmc.step_size_initialised = true;  // PX does not use NUTS
  const ChainDraws px = run_px_chain(sim.data, spec, sc);
  const Vec m_hmc = hmc.matrix(Block::DiagSigmaAlpha).colwise().mean();
  const Vec m_px = px.matrix(Block::DiagSigmaAlpha).colwise().mean();
  const int d = static_cast<int>(m_hmc.size());
  int above = 0;
  std::string detail;
  for (int i = 0; i < d; ++i) {
    above += m_px[i] > m_hmc[i];
    detail += " " + fmt(m_px[i], 3) + "/" + fmt(m_hmc[i], 3);
  }
  return {above == d, std::to_string(above) + " of " + std::to_string(d) +
                          " sigma2_alpha posterior means higher under PX (PX/HMC:" + detail + ")"};
}

// ------------------------------------------------------------------ 12

Outcome criterion12() {
  Rng rng = make_rng(1212);
  const int n = 1000000;
  std::vector<double> ar(n), iid(n);
  double x = std_normal(rng) / std::sqrt(1 - 0.81);
  for (int i = 0; i < n; ++i) {
    x = 0.9 * x + std_normal(rng);
    ar[i] = x;
    iid[i] = std_normal(rng);
  }
  const double a = iact(ar), b = iact(iid);
  return {std::abs(a - 19.0) <= 0.15 * 19.0 && std::abs(b - 1.0) <= 0.05,
          "AR(1) IACT " + fmt(a) + ", iid IACT " + fmt(b)};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria runner"};
  int only = 0;
  app.add_option("--criterion", only, "Run a single criterion (1-12)")->check(CLI::Range(1, 12));
  CLI11_PARSE(app, argc, argv);

  const std::vector<std::function<Outcome()>> all = {
      criterion1, criterion2, criterion3, criterion4,  criterion5,  criterion6,
      criterion7, criterion8, criterion9, criterion10, criterion11, criterion12};
  bool ok = true;
  for (int c = 1; c <= 12; ++c) {
    if (only && c != only) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = all[c - 1]();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::cout << "criterion " << std::setw(2) << c << ": " << (o.pass ? "PASS" : "FAIL") << "  "
              << o.detail << "  [" << fmt(secs, 3) << " s]" << std::endl;
    ok = ok && o.pass;
  }
  return ok ? 0 : 1;
}
