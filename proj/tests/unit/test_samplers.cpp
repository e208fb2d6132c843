#include "mvp/nuts.hpp"
#include "mvp/samplers.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace mvp;

namespace {

double truncated_mean(double a, double b) {
  return (norm_pdf(a) - norm_pdf(b)) / (norm_cdf(b) - norm_cdf(a));
}

}  // namespace

TEST_CASE("normal helpers") {
  CHECK(norm_cdf(0.0) == doctest::Approx(0.5));
  CHECK(norm_quantile(0.975) == doctest::Approx(1.959963985));
  CHECK(norm_sf(10.0) == doctest::Approx(7.619853e-24).epsilon(1e-5));
  CHECK(norm_isf(norm_sf(9.0)) == doctest::Approx(9.0).epsilon(1e-9));
}

TEST_CASE("truncated normal stays inside its bounds and matches the mean formula") {
  Rng rng = make_rng(21);
  const double cases[][2] = {{-1.0, 2.0}, {0.5, 0.6}, {3.0, 3.5}, {-kInf, -2.0}, {5.0, kInf}, {-0.1, 0.1}};
  for (const auto& c : cases) {
    const int n = 200000;
    double sum = 0;
    bool inside = true;
    for (int i = 0; i < n; ++i) {
      const double x = sample_truncated_normal(0, 1, c[0], c[1], rng);
      inside = inside && x >= c[0] && x <= c[1];
      sum += x;
    }
    CHECK(inside);
    CHECK(sum / n == doctest::Approx(truncated_mean(c[0], c[1])).epsilon(0.005).scale(1.0));
  }
}

TEST_CASE("truncated normal handles very deep tails and scaling") {
  Rng rng = make_rng(22);
  for (int i = 0; i < 1000; ++i) {
    const double x = sample_truncated_normal(0, 1, 40, kInf, rng);
    CHECK(std::isfinite(x));
    CHECK(x >= 40);
  }
  const double y = sample_truncated_normal(10, 2, -kInf, 0, rng);
  CHECK(y <= 0);
  CHECK_THROWS(sample_truncated_normal(0, 1, 1, 1, rng));
  CHECK_THROWS(sample_truncated_normal(0, -1, 0, 1, rng));
}

TEST_CASE("conditional normal from covariance and precision agree") {
  Mat s(3, 3);
  s << 2, 0.5, 0.3, 0.5, 1, 0.2, 0.3, 0.2, 1.5;
  const Vec mu = (Vec(3) << 1, 2, 3).finished();
  const Vec x = (Vec(3) << 0.5, 9.0, 2.0).finished();
  const ConditionalNormal a = conditional_normal_params(mu, s, 1, (Vec(2) << 0.5, 2.0).finished());
  const ConditionalNormal b = conditional_from_precision(s.inverse(), mu, x, 1);
  CHECK(a.mean == doctest::Approx(b.mean));
  CHECK(a.sd == doctest::Approx(b.sd));
}

TEST_CASE("proposal mode parsing") {
  CHECK(std::holds_alternative<proposal::Antithetic>(parse_proposal_mode("antithetic")));
  CHECK(std::get<proposal::OverRelax>(parse_proposal_mode("overrelax:0.9")).kappa == 0.9);
  CHECK(std::get<proposal::ExactGaussHmc>(parse_proposal_mode("hmc:1.5")).t == 1.5);
  CHECK(to_string(parse_proposal_mode("overrelax:0.5")) == "overrelax:0.5");
  CHECK_THROWS(parse_proposal_mode("overrelax:1.5"));
  CHECK_THROWS(parse_proposal_mode("bogus"));
  CHECK(is_deterministic(proposal::Antithetic{}));
  CHECK_FALSE(is_deterministic(proposal::OverRelax{0.5}));
}

TEST_CASE("over-relaxation preserves the target") {
  Rng rng = make_rng(23);
  double x = 0, m1 = 0, m2 = 0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    x = over_relax_step(x, 1.0, 2.0, -0.7, rng);
    m1 += x;
    m2 += (x - 1) * (x - 1);
  }
  CHECK(m1 / n == doctest::Approx(1.0).epsilon(0.02));
  CHECK(m2 / n == doctest::Approx(4.0).epsilon(0.02));
}

TEST_CASE("leapfrog is reversible and nearly conserves energy") {
  const LogDensityFn gauss = [](const Vec& t, Vec& g) {
    g = -t;
    return -0.5 * t.squaredNorm();
  };
  const Vec th = (Vec(2) << 1.0, -0.5).finished();
  const Vec u = (Vec(2) << 0.3, 0.8).finished();
  const Vec m = Vec::Ones(2);
  const auto [t1, u1] = leapfrog(th, u, 0.1, 20, gauss, m);
  const auto [t2, u2] = leapfrog(t1, -u1, 0.1, 20, gauss, m);
  CHECK((t2 - th).norm() < 1e-12);
  CHECK((u2 + u).norm() < 1e-12);
  const double h0 = 0.5 * th.squaredNorm() + 0.5 * u.squaredNorm();
  const double h1 = 0.5 * t1.squaredNorm() + 0.5 * u1.squaredNorm();
  CHECK(std::abs(h1 - h0) < 0.01);
  CHECK_THROWS(leapfrog(th, u, 0.0, 1, gauss, m));
}

TEST_CASE("NUTS samples a correlated Gaussian and adapts to the target acceptance") {
  Mat prec(3, 3);
  prec << 2.0, 0.8, 0.0, 0.8, 1.5, 0.3, 0.0, 0.3, 1.0;
  const Mat cov = prec.inverse();
  const LogDensityFn target = [&](const Vec& t, Vec& g) {
    g = -prec * t;
    return -0.5 * t.dot(prec * t);
  };
  Rng rng = make_rng(24);
  HmcConfig cfg;
  Vec th = Vec::Zero(3);
  init_step_size(target, th, cfg, rng);
  for (int i = 0; i < 2000; ++i) th = nuts_sample(target, th, cfg, true, rng).theta;
  finish_adaptation(cfg);
  double acc = 0;
  Mat second = Mat::Zero(3, 3);
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    const NutsTransition tr = nuts_sample(target, th, cfg, false, rng);
    th = tr.theta;
    acc += tr.accept_stat;
    second += th * th.transpose();
  }
  CHECK(std::abs(acc / n - cfg.target_accept) < 0.05);
  CHECK(((second / n) - cov).cwiseAbs().maxCoeff() < 0.05);
}

TEST_CASE("NUTS flags divergences on a pathological density") {
  const LogDensityFn cliff = [](const Vec& t, Vec& g) {
    g = -1e6 * t;
    return -0.5e6 * t.squaredNorm();
  };
  Rng rng = make_rng(25);
  HmcConfig cfg;
  cfg.step_size = 1.0;
  cfg.step_size_initialised = true;
  const NutsTransition tr = nuts_sample(cliff, Vec::Ones(2), cfg, false, rng);
  CHECK(tr.divergent);
  CHECK(tr.theta.allFinite());
}
