#include "mvp/config.hpp"
#include "mvp/draws_io.hpp"
#include "mvp/reference_params.hpp"
#include "mvp/simulate.hpp"

#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>

using namespace mvp;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("mvp_unit_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

SimulatedPanel small_panel(std::uint64_t seed) {
  TrueParams t;
  t.beta = Mat::Zero(2, 3);
  t.beta << 0.3, -0.5, 1.0, -0.2, 0.7, 0.0;
  t.corr = Mat::Identity(2, 2);
  t.corr(0, 1) = t.corr(1, 0) = 0.4;
  t.sigma_alpha = 0.5 * Mat::Identity(2, 2);
  return simulate_panel(t, 7, 3, CovariateGenerator::gaussian(3), seed);
}

}  // namespace

TEST_CASE("panel CSV round trip is exact") {
  const SimulatedPanel sim = small_panel(1);
  const fs::path dir = scratch("panel");
  write_panel_csv(sim.data, (dir / "panel.csv").string());
  const PanelData back = read_panel_csv((dir / "panel.csv").string(), numeric_codebook(sim.data));
  CHECK(back.y == sim.data.y);
  CHECK(back.x == sim.data.x);
  CHECK(back.n_periods == 3);
  CHECK(back.covariate_labels == sim.data.covariate_labels);
}

TEST_CASE("periods may arrive in any order but the panel must be balanced") {
  const SimulatedPanel sim = small_panel(2);
  RawTable t = parse_csv(panel_to_csv(sim.data));
  // Period-major, latest first; individuals keep their first-appearance order.
  const int c = t.column("period");
  std::stable_sort(t.rows.begin(), t.rows.end(),
                   [c](const auto& a, const auto& b) { return std::stod(a[c]) > std::stod(b[c]); });
  const PanelData back = panel_from_table(t, numeric_codebook(sim.data));
  CHECK(back.y == sim.data.y);
  t.rows.pop_back();
  CHECK_THROWS(panel_from_table(t, numeric_codebook(sim.data)));
}

TEST_CASE("age dummies with dagegp2 as base") {
  CodebookSpec cb;
  cb.outcomes = {"y1"};
  cb.categorical = {{"age", {"dagegp1", "dagegp2", "dagegp3", "dagegp4"}, "dagegp2"}};
  const auto names = cb.covariate_names();
  CHECK(names == std::vector<std::string>{"intercept", "dagegp1", "dagegp3", "dagegp4"});

  RawTable raw;
  raw.header = {"age"};
  raw.rows = {{"dagegp2"}, {"dagegp3"}};
  const EncodedCovariates enc = encode_categoricals(raw, cb);
  CHECK(enc.x.row(0).isApprox((Vec(4) << 1, 0, 0, 0).finished().transpose()));
  CHECK(enc.x.row(1).isApprox((Vec(4) << 1, 0, 1, 0).finished().transpose()));

  raw.rows = {{"dagegp9"}};
  CHECK_THROWS_AS(encode_categoricals(raw, cb), std::invalid_argument);
}

TEST_CASE("base-case patient encodes to the intercept alone") {
  const CodebookSpec cb = reference_codebook();
  RawTable raw;
  std::vector<std::string> row;
  for (const auto& c : cb.categorical) {
    raw.header.push_back(c.name);
    row.push_back(c.base);
  }
  raw.rows = {row};
  const EncodedCovariates enc = encode_categoricals(raw, cb);
  CHECK(enc.x(0, 0) == 1.0);
  CHECK(enc.x.row(0).tail(enc.x.cols() - 1).isZero(0.0));
  CHECK(enc.x.cols() == 27);
}

TEST_CASE("codebook validation and JSON round trip") {
  CodebookSpec cb = reference_codebook();
  CHECK(CodebookSpec::from_json_text(cb.to_json_text()).covariate_names() == cb.covariate_names());
  cb.categorical[0].base = "nope";
  CHECK_THROWS(cb.validate());
  CHECK_THROWS(CodebookSpec::from_json_text("{\"attributes\": []}"));
}

TEST_CASE("shipped parameter set values") {
  const auto& set = reference_parameter_set();
  CHECK(set.model1.sigma_alpha(0, 0) == doctest::Approx(0.5147));
  CHECK(set.model1.corr(3, 2) == doctest::Approx(0.5891));
  CHECK(set.model1.corr.rows() == 8);
  CHECK(set.model1.beta.cols() == 27);
  CHECK(Eigen::LLT<Mat>(set.model1.corr).info() == Eigen::Success);
  CHECK(Eigen::LLT<Mat>(set.model1.sigma_alpha).info() == Eigen::Success);
}

TEST_CASE("null simulation gives P(y = 1) = 1/2") {
  TrueParams t;
  t.beta = Mat::Zero(4, 2);
  t.corr = Mat::Identity(4, 4);
  t.sigma_alpha = Mat::Zero(4, 4);
  const SimulatedPanel sim = simulate_panel(t, 2500, 10, CovariateGenerator::gaussian(2), 3);
  double ones = 0;
  for (auto v : sim.data.y) ones += v;
  CHECK(ones / sim.data.y.size() == doctest::Approx(0.5).epsilon(0.02));  // 1e5 cells
  CHECK(sim.data.y.size() == 100000);
}

TEST_CASE("chain artifacts round trip exactly") {
  const SimulatedPanel sim = small_panel(4);
  const ModelSpec spec = ModelSpec::for_data(sim.data, false);
  SamplerConfig sc;
  sc.iterations = 60;
  sc.burn_in = 20;
  sc.store_ystar = 5;
  const ChainDraws d = run_chain(sim.data, spec, sc);
  const fs::path dir = scratch("chain");
  DrawsHeader h;
  h.spec_json = spec_to_json(spec);
  h.outcome_labels = sim.data.outcome_labels;
  write_chain(dir.string(), d, h);
  DrawsHeader h2;
  const ChainDraws back = read_chain(dir.string(), &h2);
  CHECK(back.size() == 40);
  for (Block b : {Block::Beta, Block::CorrR, Block::Alpha, Block::SigmaAlpha, Block::YStar})
    CHECK(back.matrix(b) == d.matrix(b));
  CHECK(back.accept_stat == d.accept_stat);
  CHECK(h2.outcome_labels == h.outcome_labels);
  CHECK(block_csv(back, Block::Beta) == block_csv(d, Block::Beta));
  std::ofstream(dir / "beta.csv", std::ios::app) << "1,2\n";
  CHECK_THROWS(read_chain(dir.string()));
}

TEST_CASE("config parsing is strict") {
  const fs::path dir = scratch("config");
  CHECK_THROWS_AS(FitConfig::from_json_text("{\"data\": {\"panel\": \"p.csv\"}, \"sampler\": {\"iters\": 5}}"),
                  ConfigError);
  CHECK_THROWS_AS(FitConfig::from_json_text("{}"), ConfigError);
  CHECK_THROWS_AS(FitConfig::from_json_text("not json"), ConfigError);
  CHECK_THROWS_AS(FitConfig::from_json_text("{\"data\": {\"panel\": \"p.csv\"}, \"priors\": {\"beta\": \"laplace\"}}"),
                  ConfigError);
  CHECK_THROWS_AS(FitConfig::from_json_text("{\"data\": {\"panel\": \"p.csv\"}, \"hmc\": {\"adapt\": false}}"),
                  ConfigError);
  const FitConfig c = FitConfig::from_json_text(
      "{\"data\": {\"panel\": \"p.csv\"}, \"model\": {\"type\": 1},"
      " \"priors\": {\"beta\": \"horseshoe\", \"sigma_alpha\": \"hiw\"},"
      " \"sampler\": {\"iterations\": 300, \"burn_in\": 100, \"beta_mode\": \"overrelax:0.5\"},"
      " \"hmc\": {\"step_size\": 0.2, \"adapt\": false}, \"seed\": 9}",
      dir.string());
  CHECK(c.panel_path == (dir / "p.csv").string());
  CHECK(c.priors.beta == BetaPriorKind::Horseshoe);
  CHECK(c.priors.sigma_alpha == SigmaAlphaPriorKind::Hierarchical);
  CHECK(c.sampler.seed == 9);
  CHECK(c.sampler.hmc.step_size == 0.2);
  CHECK(std::get<proposal::OverRelax>(c.sampler.beta_mode).kappa == 0.5);
}
