#include "mvp/priors.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

using namespace mvp;

TEST_CASE("inverse-Wishart mean is scale / (df - D - 1)") {
  Rng rng = make_rng(11);
  Mat scale(2, 2);
  scale << 2.0, 0.5, 0.5, 1.0;
  const double df = 8.0;
  Mat sum = Mat::Zero(2, 2);
  const int n = 40000;
  for (int i = 0; i < n; ++i) sum += sample_inverse_wishart(df, scale, rng);
  const Mat expect = scale / (df - 3.0);
  CHECK((sum / n - expect).cwiseAbs().maxCoeff() < 0.02);
}

TEST_CASE("inverse-Wishart rejects bad inputs") {
  Rng rng = make_rng(1);
  CHECK_THROWS(sample_inverse_wishart(1.0, Mat::Identity(3, 3), rng));
  Mat bad = Mat::Identity(2, 2);
  bad(0, 0) = -1;
  CHECK_THROWS(sample_inverse_wishart(5.0, bad, rng));
}

TEST_CASE("marginally uniform prior: E r = 0, E r^2 = 1/3") {
  Rng rng = make_rng(12);
  const int n = 40000;
  double m1 = 0, m2 = 0;
  for (int i = 0; i < n; ++i) {
    const double r = sample_corr_marg_uniform(3, 4.0, rng)(2, 0);
    m1 += r;
    m2 += r * r;
  }
  CHECK(std::abs(m1 / n) < 0.01);
  CHECK(m2 / n == doctest::Approx(1.0 / 3.0).epsilon(0.02));
}

TEST_CASE("HIW with df 2 gives uniform marginal correlations") {
  Rng rng = make_rng(13);
  HiwPrior hiw(2.0, Vec::Ones(3));
  const int n = 40000;
  double m2 = 0;
  for (int i = 0; i < n; ++i) {
    const Mat s = sample_hiw_prior(hiw, rng);
    const double r = s(1, 0) / std::sqrt(s(0, 0) * s(1, 1));
    m2 += r * r;
  }
  CHECK(m2 / n == doctest::Approx(1.0 / 3.0).epsilon(0.02));
}

TEST_CASE("HIW update keeps the auxiliaries positive and the draw SPD") {
  Rng rng = make_rng(14);
  HiwPrior hiw(2.0, Vec::Ones(2));
  Mat alpha(2, 10);
  for (int i = 0; i < 10; ++i) alpha.col(i) = std_normal_vec(2, rng);
  Mat s = Mat::Identity(2, 2);
  for (int it = 0; it < 100; ++it) {
    s = hiw_update_sigma_alpha(alpha, s, hiw, rng);
    CHECK(Eigen::LLT<Mat>(s).info() == Eigen::Success);
    CHECK((hiw.aux.array() > 0).all());
  }
}

TEST_CASE("horseshoe prior draw has half-Cauchy global scale") {
  Rng rng = make_rng(15);
  HorseshoeState st({false, true, true}, 4.0);
  std::vector<double> tau;
  for (int i = 0; i < 20001; ++i) {
    const Vec b = sample_horseshoe_prior(st, rng);
    CHECK(b.size() == 3);
    tau.push_back(st.global);
  }
  std::nth_element(tau.begin(), tau.begin() + 10000, tau.end());
  CHECK(tau[10000] == doctest::Approx(1.0).epsilon(0.05));
  // Intercept variance is fixed.
  CHECK(horseshoe_variances(st)[0] == 4.0);
}

TEST_CASE("horseshoe Gibbs on prior-drawn coefficients keeps the prior of tau") {
  // beta | scales from the prior, scales | beta from the update: a Gibbs
  // chain whose stationary law is the prior.
  Rng rng = make_rng(16);
  HorseshoeState st({false, true, true, true}, 1.0);
  Vec beta = sample_horseshoe_prior(st, rng);
  const int n = 200000;
  int below_one = 0;
  for (int i = 0; i < n; ++i) {
    const Vec v = horseshoe_update(beta, st, rng);
    for (int j = 0; j < 4; ++j) beta[j] = std::sqrt(v[j]) * std_normal(rng);
    if (st.global < 1.0) ++below_one;
  }
  CHECK(static_cast<double>(below_one) / n == doctest::Approx(0.5).epsilon(0.06));
}

TEST_CASE("horseshoe update checks sizes") {
  Rng rng = make_rng(1);
  HorseshoeState st({false, true}, 1.0);
  CHECK_THROWS(horseshoe_update(Vec::Zero(3), st, rng));
}
