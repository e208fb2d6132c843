#include "mvp/diagnostics.hpp"
#include "mvp/geweke.hpp"
#include "mvp/graph.hpp"
#include "mvp/predict.hpp"
#include "mvp/simulate.hpp"

#include <doctest.h>

#include <cmath>

using namespace mvp;

namespace {

TrueParams random_truth(int d, int k, Rng& rng) {
  TrueParams t;
  t.beta.resize(d, k);
  for (int i = 0; i < t.beta.size(); ++i) t.beta.data()[i] = 0.5 * std_normal(rng);
  t.corr = sample_corr_marg_uniform(d, d + 1.0, rng).values();
  t.sigma_alpha = 0.5 * Mat::Identity(d, d);
  return t;
}

}  // namespace

TEST_CASE("beta conditional matches a dense regression formula") {
  Rng rng = make_rng(51);
  const TrueParams t = random_truth(2, 3, rng);
  const SimulatedPanel sim = simulate_panel(t, 5, 4, CovariateGenerator::gaussian(3), 51);
  const ModelSpec spec = ModelSpec::for_data(sim.data, false);
  SamplerConfig sc;
  GibbsSampler g(sim.data, spec, sc);
  g.state().ystar = sim.ystar;
  g.state().alpha = sim.alpha;
  g.state().set_corr(corr_to_cholesky(CorrelationMatrix(t.corr)));
  Vec mean;
  Mat prec;
  g.beta_conditional(mean, prec);
  // Stack the observations: vec over outcomes with design I_D (x) x'.
  const int n = sim.data.n_obs(), d = 2, k = 3;
  Mat big_x = Mat::Zero(n * d, d * k);
  Vec big_y(n * d);
  Mat big_q = Mat::Zero(n * d, n * d);
  const Mat q = t.corr.inverse();
  for (int r = 0; r < n; ++r) {
    for (int e = 0; e < d; ++e) {
      big_x.block(r * d + e, e * k, 1, k) = sim.data.x.row(r);
      big_y[r * d + e] = sim.ystar(e, r) - sim.alpha(e, r / 4);
    }
    big_q.block(r * d, r * d, d, d) = q;
  }
  const Mat p = big_x.transpose() * big_q * big_x + Mat::Identity(d * k, d * k) / 100.0;
  CHECK((prec - p).cwiseAbs().maxCoeff() < 1e-10);
  const Vec m = p.ldlt().solve(big_x.transpose() * big_q * big_y);
  CHECK((mean - m).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("chains are deterministic given the seed") {
  Rng rng = make_rng(52);
  const SimulatedPanel sim = simulate_panel(random_truth(3, 2, rng), 10, 4, CovariateGenerator::gaussian(2), 52);
  const ModelSpec spec = ModelSpec::for_data(sim.data, false);
  SamplerConfig sc;
  sc.iterations = 100;
  sc.burn_in = 50;
  const ChainDraws a = run_chain(sim.data, spec, sc), b = run_chain(sim.data, spec, sc);
  CHECK(a.matrix(Block::Beta) == b.matrix(Block::Beta));
  CHECK(a.matrix(Block::CholL) == b.matrix(Block::CholL));
  sc.seed = 2;
  CHECK(run_chain(sim.data, spec, sc).matrix(Block::Beta) != a.matrix(Block::Beta));
}

TEST_CASE("NUTS acceptance after adaptation is near the target") {
  Rng rng = make_rng(53);
  const SimulatedPanel sim = simulate_panel(random_truth(3, 2, rng), 30, 8, CovariateGenerator::gaussian(2), 53);
  SamplerConfig sc;
  sc.iterations = 3000;
  sc.burn_in = 1000;
  const ChainDraws d = run_chain(sim.data, ModelSpec::for_data(sim.data, false), sc);
  double acc = 0;
  for (double a : d.accept_stat) acc += a;
  CHECK(std::abs(acc / d.size() - sc.hmc.target_accept) < 0.05);
  for (const Vec& r : d.corr_r) CHECK((r.array().abs() < 1).all());
}

TEST_CASE("95% intervals cover the truth in simulation") {
  int covered = 0, total = 0;
  for (int rep = 0; rep < 20; ++rep) {
    Rng rng = make_rng(540 + rep);
    const TrueParams t = random_truth(3, 3, rng);
    const SimulatedPanel sim = simulate_panel(t, 30, 8, CovariateGenerator::gaussian(3), 540 + rep);
    SamplerConfig sc;
    sc.iterations = 3000;
    sc.burn_in = 1000;
    sc.seed = 1000 + rep;
    sc.store_alpha = false;
    const ChainDraws d = run_chain(sim.data, ModelSpec::for_data(sim.data, false), sc);
    const Mat b = d.matrix(Block::Beta), r = d.matrix(Block::CorrR);
    auto tally = [&](const Mat& draws, int col, double truth) {
      std::vector<double> v(draws.rows());
      for (int i = 0; i < draws.rows(); ++i) v[i] = draws(i, col);
      covered += quantile(v, 0.025) <= truth && truth <= quantile(v, 0.975);
      ++total;
    };
    for (int e = 0; e < 3; ++e)
      for (int k = 0; k < 3; ++k) tally(b, e * 3 + k, t.beta(e, k));
    const Vec rt = vechl(t.corr);
    for (int j = 0; j < rt.size(); ++j) tally(r, j, rt[j]);
  }
  CHECK(static_cast<double>(covered) / total >= 0.90);
}

TEST_CASE("horseshoe and HIW chains run and stay finite") {
  Rng rng = make_rng(55);
  const SimulatedPanel sim = simulate_panel(random_truth(2, 4, rng), 15, 4, CovariateGenerator::gaussian(4), 55);
  PriorSpec p;
  p.beta = BetaPriorKind::Horseshoe;
  p.sigma_alpha = SigmaAlphaPriorKind::Hierarchical;
  SamplerConfig sc;
  sc.iterations = 400;
  sc.burn_in = 100;
  sc.beta_mode = proposal::OverRelax{0.5};
  const ChainDraws d = run_chain(sim.data, ModelSpec::for_data(sim.data, false, p), sc);
  CHECK(d.matrix(Block::Beta).allFinite());
  CHECK(d.matrix(Block::SigmaAlpha).allFinite());
}

TEST_CASE("PX chain keeps a unit diagonal") {
  Rng rng = make_rng(56);
  const SimulatedPanel sim = simulate_panel(random_truth(3, 2, rng), 10, 4, CovariateGenerator::gaussian(2), 56);
  SamplerConfig sc;
  sc.iterations = 200;
  sc.burn_in = 50;
  sc.hmc.step_size_initialised = true;
  const ChainDraws d = run_px_chain(sim.data, ModelSpec::for_data(sim.data, false), sc);
  CHECK(d.method == "px");
  for (const Vec& r : d.corr_r) CHECK((r.array().abs() < 1).all());
}

TEST_CASE("predictive events") {
  CHECK(PredictiveEvent::at_least_one({2, 3}).name() == "P(y3+y4>=1)");
  CHECK(PredictiveEvent::all({0, 1}).name() == "P(y1=1,y2=1)");
  CHECK(PredictiveEvent::single(0).name() == "P(y1=1)");
  Rng rng = make_rng(57);
  const Mat eye = Mat::Identity(2, 2);
  // Independent standard normals at zero mean: 3/4 and 1/4.
  CHECK(event_probability_mc(Vec::Zero(2), eye, PredictiveEvent::at_least_one({0, 1}), 200000, rng) ==
        doctest::Approx(0.75).epsilon(0.01));
  CHECK(event_probability_mc(Vec::Zero(2), eye, PredictiveEvent::all({0, 1}), 200000, rng) ==
        doctest::Approx(0.25).epsilon(0.02));
  CHECK_THROWS(PredictiveEvent::single(5).validate(3));
}

TEST_CASE("graph from identity precision draws has no edges") {
  std::vector<Mat> draws(200, Mat::Identity(4, 4));
  CHECK(extract_graph(draws, 0.95).empty());
  Rng rng = make_rng(58);
  std::vector<Mat> signal;
  for (int i = 0; i < 500; ++i) {
    Mat m = Mat::Identity(3, 3);
    m(1, 0) = m(0, 1) = -0.4 + 0.05 * std_normal(rng);
    signal.push_back(m);
  }
  const auto edges = extract_graph(signal, 0.95);
  REQUIRE(edges.size() == 1);
  CHECK(edges[0].i == 1);
  CHECK(edges[0].j == 0);
  CHECK_FALSE(edges[0].positive());
  CHECK(graph_to_dot(edges, 3, {"a", "b", "c"}, "R_inv").find("sign=neg") != std::string::npos);
}

TEST_CASE("quick joint-distribution test passes and catches the mutant") {
  GewekeConfig cfg = GewekeConfig::small(BetaPriorKind::Normal, SigmaAlphaPriorKind::InverseWishart);
  cfg.sweeps = 40000;
  cfg.prior_draws = 40000;
  cfg.chains = 20;
  cfg.burn_in = 500;
  cfg.seed = 59;
  CHECK(geweke_joint_test(cfg).max_abs_z < 4.0);
  cfg.fault_alpha_variance_scale = 1.5;
  CHECK(geweke_joint_test(cfg).max_abs_z > 6.0);
}
