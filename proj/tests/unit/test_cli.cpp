#include "mvp/draws_io.hpp"

#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace mvp;
namespace fs = std::filesystem;

namespace {

const fs::path kRoot = fs::temp_directory_path() / "mvp_cli_tests";

int run(const std::string& args, std::string* output = nullptr) {
  const fs::path log = kRoot / "last_output.txt";
  const std::string cmd = std::string("\"") + MVPROBIT_BIN + "\" " + args + " > \"" + log.string() + "\" 2>&1";
  const int status = std::system(cmd.c_str());
  if (output) {
    std::ifstream in(log);
    std::stringstream ss;
    ss << in.rdbuf();
    *output = ss.str();
  }
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Simulated panel plus a short fit config under kRoot/name.
fs::path prepare(const std::string& name) {
  const fs::path dir = kRoot / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  REQUIRE(run("simulate -P 12 -T 3 -D 4 -K 2 --seed 5 --out \"" + (dir / "data").string() + "\"") == 0);
  std::ofstream(dir / "cfg.json") << R"({"data": {"panel": "data/panel.csv"},
    "sampler": {"iterations": 150, "burn_in": 50}, "seed": 3})";
  return dir;
}

}  // namespace

TEST_CASE("unknown flags print usage and exit 2") {
  fs::create_directories(kRoot);
  std::string out;
  CHECK(run("fit --bogus-flag 1", &out) == 2);
  CHECK(out.find("Usage") != std::string::npos);
  CHECK(run("no-such-command", &out) == 2);
  CHECK(run("--help", &out) == 0);
}

TEST_CASE("config errors exit 2, runtime failures exit 1") {
  fs::create_directories(kRoot);
  std::ofstream(kRoot / "bad.json") << R"({"data": {"panel": "x.csv"}, "sampler": {"iters": 1}})";
  CHECK(run("fit --config \"" + (kRoot / "bad.json").string() + "\"") == 2);
  CHECK(run("fit --config \"" + (kRoot / "missing.json").string() + "\"") == 2);
  CHECK(run("diagnose --draws \"" + (kRoot / "no_such_dir").string() + "\"") == 1);
  CHECK(run("graph --draws x --level 2") == 2);
}

TEST_CASE("fit is byte-identical for a fixed seed") {
  const fs::path dir = prepare("determinism");
  const std::string cfg = (dir / "cfg.json").string();
  REQUIRE(run("fit --config \"" + cfg + "\" --seed 7 --out \"" + (dir / "a").string() + "\"") == 0);
  REQUIRE(run("fit --config \"" + cfg + "\" --seed 7 --out \"" + (dir / "b").string() + "\"") == 0);
  int compared = 0;
  for (const auto& f : fs::directory_iterator(dir / "a")) {
    if (f.path().extension() != ".csv") continue;
    CHECK(slurp(f.path()) == slurp(dir / "b" / f.path().filename()));
    ++compared;
  }
  CHECK(compared >= 5);
  REQUIRE(run("fit --config \"" + cfg + "\" --seed 8 --out \"" + (dir / "c").string() + "\"") == 0);
  CHECK(slurp(dir / "a" / "beta.csv") != slurp(dir / "c" / "beta.csv"));
}

TEST_CASE("replicates get their own directories") {
  const fs::path dir = prepare("replicates");
  REQUIRE(run("fit --config \"" + (dir / "cfg.json").string() + "\" --replicates 2 --out \"" +
              (dir / "fit").string() + "\"") == 0);
  CHECK(fs::exists(dir / "fit" / "replicate_1" / "beta.csv"));
  CHECK(fs::exists(dir / "fit" / "replicate_2" / "beta.csv"));
  CHECK(slurp(dir / "fit" / "replicate_1" / "beta.csv") != slurp(dir / "fit" / "replicate_2" / "beta.csv"));
}

TEST_CASE("predict names the bundle column and diagnose writes tables") {
  const fs::path dir = prepare("predict");
  const std::string fit = (dir / "fit").string();
  REQUIRE(run("fit --config \"" + (dir / "cfg.json").string() + "\" --out \"" + fit + "\"") == 0);
  const fs::path csv = dir / "pred.csv";
  REQUIRE(run("predict --draws \"" + fit + "\" --bundle 3,4 --joint 1,2 --n-mc 200 --out \"" + csv.string() + "\"") == 0);
  const std::string text = slurp(csv);
  const std::string header = text.substr(0, text.find('\n'));
  CHECK(header.find("P(y3+y4>=1)") != std::string::npos);
  CHECK(header.find("P(y1=1,y2=1)") != std::string::npos);
  CHECK(run("predict --draws \"" + fit + "\" --bundle 3,9") == 2);

  REQUIRE(run("diagnose --draws \"" + fit + "\" --out \"" + (dir / "diag").string() + "\"") == 0);
  CHECK(fs::exists(dir / "diag" / "summary.csv"));
  REQUIRE(run("diagnose --draws \"" + fit + "\" --compare \"" + fit + "\" --method ar --out \"" +
              (dir / "diag").string() + "\"") == 0);
  CHECK(fs::exists(dir / "diag" / "iact_ratio.csv"));
  CHECK(run("diagnose --draws \"" + fit + "\" --method batch") == 2);
}

TEST_CASE("graph on identity-only draws has an empty edge list") {
  const fs::path dir = kRoot / "graph";
  fs::remove_all(dir);
  ChainDraws d;
  d.n_outcomes = 3;
  d.coef_per_outcome = 1;
  d.n_individuals = 1;
  d.beta_names = {"intercept"};
  for (int i = 0; i < 50; ++i) {
    d.beta.push_back(Vec::Zero(3));
    d.chol_l.push_back(Vec::Zero(3));
    d.corr_r.push_back(Vec::Zero(3));
    d.diag_sigma_alpha.push_back(Vec::Ones(3));
    d.corr_alpha.push_back(Vec::Zero(3));
    d.sigma_alpha.push_back(vech(Mat::Identity(3, 3)));
    d.divergent.push_back(0);
    d.accept_stat.push_back(1.0);
    d.step_size.push_back(0.1);
    d.tree_depth.push_back(1);
  }
  DrawsHeader h;
  h.outcome_labels = {"y1", "y2", "y3"};
  write_chain((dir / "draws").string(), d, h);
  REQUIRE(run("graph --draws \"" + (dir / "draws").string() + "\" --matrix R_inv --level 0.95 --out \"" +
              (dir / "out").string() + "\"") == 0);
  const std::string edges = slurp(dir / "out" / "edges.csv");
  CHECK(std::count(edges.begin(), edges.end(), '\n') == 1);  // header only
  CHECK(fs::exists(dir / "out" / "graph.dot"));
}

TEST_CASE("prior-study and geweke-test commands") {
  const fs::path dir = kRoot / "studies";
  fs::remove_all(dir);
  REQUIRE(run("prior-study --dim 3 --draws 2000 --out \"" + (dir / "ps").string() + "\"") == 0);
  CHECK(fs::exists(dir / "ps" / "corr_draws.csv"));
  CHECK(fs::exists(dir / "ps" / "summary.csv"));
  REQUIRE(run("geweke-test --sweeps 2000 --prior-draws 2000 --chains 4 --burn-in 100 --out \"" +
              (dir / "gw").string() + "\"") == 0);
  CHECK(fs::exists(dir / "gw" / "zscores.csv"));
}

TEST_CASE("output root comes from the environment") {
  const fs::path dir = kRoot / "envroot";
  fs::remove_all(dir);
  fs::create_directories(dir);
  ::setenv("MVPROBIT_OUTPUT_ROOT", dir.string().c_str(), 1);
  CHECK(run("prior-study --dim 2 --draws 500") == 0);
  ::unsetenv("MVPROBIT_OUTPUT_ROOT");
  CHECK(fs::exists(dir / "prior_study" / "summary.csv"));
}
