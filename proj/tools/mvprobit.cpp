// mvprobit: simulate, fit, diagnose, predict, graph, prior-study, geweke-test.
// Exit codes: 0 success, 2 usage or configuration error, 1 runtime failure.

#include "mvp/config.hpp"
#include "mvp/diagnostics.hpp"
#include "mvp/draws_io.hpp"
#include "mvp/examples.hpp"
#include "mvp/geweke.hpp"
#include "mvp/gibbs.hpp"
#include "mvp/graph.hpp"
#include "mvp/predict.hpp"
#include "mvp/priors.hpp"
#include "mvp/simulate.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

namespace fs = std::filesystem;
using namespace mvp;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << text;
}

std::string out_dir(const std::string& flag, const std::string& sub) {
  return flag.empty() ? (fs::path(default_output_root()) / sub).string() : flag;
}

std::vector<int> parse_outcome_list(const std::string& text, int d) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t pos = 0;
    int v = 0;
    try {
      v = std::stoi(item, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos == 0 || pos != item.size()) throw UsageError("bad outcome index '" + item + "'");
    if (v < 1 || v > d) throw UsageError("outcome " + item + " outside 1.." + std::to_string(d));
    out.push_back(v - 1);
  }
  if (out.empty()) throw UsageError("empty outcome list");
  return out;
}

std::vector<double> parse_numbers(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t pos = 0;
    double v = 0;
    try {
      v = std::stod(item, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos == 0 || pos != item.size()) throw UsageError("bad number '" + item + "'");
    out.push_back(v);
  }
  return out;
}

std::vector<Block> parse_blocks(const std::string& text) {
  std::vector<Block> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto b = parse_block(item);
    if (!b) throw UsageError("unknown block '" + item + "'");
    out.push_back(*b);
  }
  return out;
}

// ---------------------------------------------------------------- simulate

struct SimulateOpts {
  bool reference = false;
  int model = 1;
  int individuals = 162, periods = 16;
  int outcomes = 3, covariates = 3;
  std::uint64_t seed = 1;
  std::string out;
};

int cmd_simulate(const SimulateOpts& o) {
  if (o.model != 1 && o.model != 2) throw UsageError("--model must be 1 or 2");
  SimulatedPanel sim;
  if (o.reference) {
    const auto& set = reference_parameter_set();
    const TrueParams truth = o.model == 1 ? reference_truth_model1() : reference_truth_model2();
    IndividualGenerator ind;
    if (o.model == 2) {
      ind.names = set.individual_labels;
      ind.binary = set.individual_binary;
    }
    sim = simulate_panel(truth, o.individuals, o.periods, CovariateGenerator::design(set.codebook),
                         o.seed, ind);
    sim.data.outcome_labels = set.outcome_labels;
  } else {
    if (o.model != 1) throw UsageError("--model 2 needs --reference-params");
    if (o.outcomes < 1 || o.covariates < 1) throw UsageError("--outcomes and --covariates must be >= 1");
    Rng rng = make_rng(o.seed, 7);
    TrueParams t;
    t.beta.resize(o.outcomes, o.covariates);
    for (int i = 0; i < t.beta.size(); ++i) t.beta.data()[i] = 0.5 * std_normal(rng);
    t.corr = sample_corr_marg_uniform(o.outcomes, o.outcomes + 1.0, rng).values();
    t.sigma_alpha = 0.5 * Mat::Identity(o.outcomes, o.outcomes);
    sim = simulate_panel(t, o.individuals, o.periods, CovariateGenerator::gaussian(o.covariates), o.seed);
  }
  const fs::path dir = out_dir(o.out, "simulate");
  fs::create_directories(dir);
  write_panel_csv(sim.data, (dir / "panel.csv").string());
  write_codebook(numeric_codebook(sim.data), (dir / "codebook.json").string());
  write_text(dir / "truth.json", truth_to_json(sim));
  std::cout << "wrote " << (dir / "panel.csv").string() << " (D=" << sim.data.n_outcomes
            << ", P=" << sim.data.n_individuals << ", T=" << sim.data.n_periods
            << ", K=" << sim.data.n_covariates() << ")\n";
  return 0;
}

// --------------------------------------------------------------------- fit

struct FitOpts {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<int> replicates;
  std::string out;
};

int cmd_fit(const FitOpts& o) {
  FitConfig cfg = FitConfig::from_file(o.config);
  if (o.seed) cfg.sampler.seed = *o.seed;
  if (o.replicates) {
    if (*o.replicates < 1) throw ConfigError("--replicates must be >= 1");
    cfg.replicates = *o.replicates;
  }
  const PanelData data = load_fit_panel(cfg);
  if (cfg.model == 2 && data.z.cols() == 0)
    throw ConfigError("model 2 needs individual-level attributes in the codebook");
  const ModelSpec spec = ModelSpec::for_data(data, cfg.model == 2, cfg.priors);
  try {
    spec.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("priors: ") + e.what());
  }
  const fs::path root = cfg.output_directory.empty() ? fs::path(out_dir(o.out, "fit"))
                                                     : fs::path(o.out.empty() ? cfg.output_directory : o.out);

  nlohmann::json header_cfg = nlohmann::json::parse(cfg.source_text);
  const std::string codebook = cfg.codebook_path.empty()
                                   ? (fs::path(cfg.panel_path).parent_path() / "codebook.json").string()
                                   : cfg.codebook_path;
  header_cfg["resolved"] = {{"panel", fs::absolute(cfg.panel_path).string()},
                            {"codebook", fs::absolute(codebook).string()},
                            {"seed", cfg.sampler.seed},
                            {"model", cfg.model}};
  DrawsHeader header;
  header.spec_json = spec_to_json(spec);
  header.outcome_labels = data.outcome_labels;

  // One seed stream per replicate; each writes only its own directory.
  const int n = cfg.replicates;
  std::vector<std::string> errors(n);
  auto run_one = [&](int r) {
    try {
      SamplerConfig sc = cfg.sampler;
      sc.seed = cfg.sampler.seed + static_cast<std::uint64_t>(r);
      const fs::path dir = n == 1 ? root : root / ("replicate_" + std::to_string(r + 1));
      DrawsHeader h = header;
      nlohmann::json hc = header_cfg;
      hc["resolved"]["seed"] = sc.seed;
      h.config_json = hc.dump();
      write_chain(dir.string(), run_chain(data, spec, sc), h);
      if (cfg.px_comparison) write_chain((dir / "px").string(), run_px_chain(data, spec, sc), h);
    } catch (const std::exception& e) {
      errors[r] = e.what();
    }
  };
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  for (int start = 0; start < n; start += static_cast<int>(hw)) {
    std::vector<std::thread> pool;
    for (int r = start; r < std::min(n, start + static_cast<int>(hw)); ++r) pool.emplace_back(run_one, r);
    for (auto& t : pool) t.join();
  }
  for (int r = 0; r < n; ++r)
    if (!errors[r].empty()) throw std::runtime_error("replicate " + std::to_string(r + 1) + ": " + errors[r]);
  std::cout << "wrote " << n << " chain(s) under " << root.string() << "\n";
  return 0;
}

// ---------------------------------------------------------------- diagnose

struct DiagnoseOpts {
  std::string draws, compare, blocks = "beta,alpha,vechL_R,diag_sigma_alpha", method = "geyer", out;
};

int cmd_diagnose(const DiagnoseOpts& o) {
  const auto blocks = parse_blocks(o.blocks);
  IactMethod method;
  try {
    method = parse_iact_method(o.method);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  const ChainDraws a = read_chain(o.draws);
  const fs::path dir = out_dir(o.out, "diagnose");
  if (o.compare.empty()) {
    const auto rows = summarize_draws(a, blocks, method);
    std::cout << summary_text(rows);
    write_text(dir / "summary.csv", summary_csv(rows));
  } else {
    const ChainDraws b = read_chain(o.compare);
    const auto report = iact_ratio_report(a, b, blocks, method);
    std::cout << ratio_report_text(report);
    write_text(dir / "iact_ratio.csv", ratio_report_csv(report));
  }
  return 0;
}

// ----------------------------------------------------------------- predict

struct PredictOpts {
  std::string draws, out, x, outcomes;
  std::vector<std::string> bundles, joints;
  int n_mc = 2000;
  std::uint64_t seed = 1;
};

int cmd_predict(const PredictOpts& o) {
  DrawsHeader header;
  const ChainDraws draws = read_chain(o.draws, &header);
  const int d = draws.n_outcomes;
  const int k = draws.coef_per_outcome;
  const auto spec = nlohmann::json::parse(header.spec_json.empty() ? "{}" : header.spec_json);
  const int g = spec.value("n_individual", 0);

  // Base-case covariates: intercept only, then the individual's own z.
  Vec base = Vec::Zero(k - g);
  base[0] = 1.0;
  if (!o.x.empty()) {
    const auto v = parse_numbers(o.x);
    if (static_cast<int>(v.size()) != k - g)
      throw UsageError("--x needs " + std::to_string(k - g) + " values");
    base = Eigen::Map<const Vec>(v.data(), k - g);
  }
  Mat rows(g > 0 ? draws.n_individuals : 1, k);
  for (int r = 0; r < rows.rows(); ++r) rows.row(r).head(k - g) = base.transpose();
  if (g > 0) {
    const auto resolved = nlohmann::json::parse(header.config_json).at("resolved");
    FitConfig fc;
    fc.panel_path = resolved.at("panel").get<std::string>();
    fc.codebook_path = resolved.at("codebook").get<std::string>();
    const PanelData data = load_fit_panel(fc);
    rows.rightCols(g) = data.z;
  }

  std::vector<PredictiveEvent> events;
  const auto singles = o.outcomes.empty() ? std::vector<int>{} : parse_outcome_list(o.outcomes, d);
  if (o.outcomes.empty())
    for (int e = 0; e < d; ++e) events.push_back(PredictiveEvent::single(e));
  for (int e : singles) events.push_back(PredictiveEvent::single(e));
  for (const auto& b : o.bundles) events.push_back(PredictiveEvent::at_least_one(parse_outcome_list(b, d)));
  for (const auto& b : o.joints) events.push_back(PredictiveEvent::all(parse_outcome_list(b, d)));

  Rng rng = make_rng(o.seed, 0);
  std::vector<PredictiveSummary> cols;
  for (const auto& ev : events) cols.push_back(posterior_predictive(draws, rows, ev, o.n_mc, rng));
  const fs::path file = o.out.empty() ? fs::path(default_output_root()) / "predict" / "predictions.csv"
                                      : fs::path(o.out);
  write_text(file, predictive_to_csv(cols));
  std::cout << "wrote " << file.string() << "\n";
  return 0;
}

// ------------------------------------------------------------------- graph

struct GraphOpts {
  std::string draws, matrix = "R_inv", out;
  double level = 0.95;
};

int cmd_graph(const GraphOpts& o) {
  if (!(o.level > 0 && o.level < 1)) throw UsageError("--level must lie in (0, 1)");
  GraphMatrix which;
  try {
    which = parse_graph_matrix(o.matrix);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  DrawsHeader header;
  const ChainDraws draws = read_chain(o.draws, &header);
  const auto edges = extract_graph(precision_draws(draws, which), o.level);
  const fs::path dir = out_dir(o.out, "graph");
  write_text(dir / "graph.dot", graph_to_dot(edges, draws.n_outcomes, header.outcome_labels, o.matrix));
  write_text(dir / "edges.csv", graph_to_csv(edges));
  std::cout << edges.size() << " edge(s) written to " << dir.string() << "\n";
  return 0;
}

// ------------------------------------------------------------- prior-study

struct PriorStudyOpts {
  int dim = 4, draws = 100000;
  std::optional<double> nu;
  std::uint64_t seed = 1;
  std::string out;
};

int cmd_prior_study(const PriorStudyOpts& o) {
  PriorStudyConfig c;
  c.dim = o.dim;
  c.nu = o.nu.value_or(o.dim + 1.0);
  c.draws = o.draws;
  c.seed = o.seed;
  if (c.dim < 2 || !(c.nu > c.dim - 1) || c.draws < 2) throw UsageError("need dim >= 2, nu > dim - 1, draws >= 2");
  const PriorStudy s = run_prior_study(c);
  const fs::path dir = out_dir(o.out, "prior_study");
  write_text(dir / "corr_draws.csv", prior_study_draws_csv(s.corr, s.names("r")));
  write_text(dir / "partial_draws.csv", prior_study_draws_csv(s.partial, s.names("rho")));
  const std::string summary = prior_study_summary_csv(s);
  write_text(dir / "summary.csv", summary);
  std::cout << summary;
  return 0;
}

// ------------------------------------------------------------- geweke-test

struct GewekeOpts {
  std::string beta_prior = "normal", sigma_prior = "iw", beta_mode = "independent",
              alpha_mode = "independent", out;
  int sweeps = 100000, prior_draws = 100000, burn_in = 2000, chains = 400;
  double fault = 1.0;
  std::uint64_t seed = 1;
};

int cmd_geweke(const GewekeOpts& o) {
  BetaPriorKind bp;
  if (o.beta_prior == "normal") bp = BetaPriorKind::Normal;
  else if (o.beta_prior == "horseshoe") bp = BetaPriorKind::Horseshoe;
  else throw UsageError("--beta-prior must be normal or horseshoe");
  SigmaAlphaPriorKind sp;
  if (o.sigma_prior == "iw") sp = SigmaAlphaPriorKind::InverseWishart;
  else if (o.sigma_prior == "hiw") sp = SigmaAlphaPriorKind::Hierarchical;
  else throw UsageError("--sigma-prior must be iw or hiw");
  GewekeConfig c = GewekeConfig::small(bp, sp);
  try {
    c.beta_mode = parse_proposal_mode(o.beta_mode);
    c.alpha_mode = parse_proposal_mode(o.alpha_mode);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  c.sweeps = o.sweeps;
  c.prior_draws = o.prior_draws;
  c.burn_in = o.burn_in;
  c.chains = o.chains;
  c.fault_alpha_variance_scale = o.fault;
  c.seed = o.seed;
  try {
    c.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  const GewekeResult r = geweke_joint_test(c);
  std::cout << geweke_table(r);
  write_text(fs::path(out_dir(o.out, "geweke")) / "zscores.csv", geweke_csv(r));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multivariate probit panel models with antithetic Gibbs sampling"};
  app.require_subcommand(1);

  SimulateOpts so;
  auto* sim = app.add_subcommand("simulate", "Simulate a panel and write panel.csv, codebook.json, truth.json");
  sim->add_flag("--reference-params", so.reference, "Use the shipped 8-outcome parameter set and attribute design");
  sim->add_option("--model", so.model, "1 or 2 (2 adds individual-level covariates)");
  sim->add_option("--individuals,-P", so.individuals, "Number of individuals");
  sim->add_option("--periods,-T", so.periods, "Periods per individual");
  sim->add_option("--outcomes,-D", so.outcomes, "Outcomes (without --reference-params)");
  sim->add_option("--covariates,-K", so.covariates, "Covariates incl. constant (without --reference-params)");
  sim->add_option("--seed", so.seed, "Random seed");
  sim->add_option("--out", so.out, "Output directory");

  FitOpts fo;
  auto* fit = app.add_subcommand("fit", "Run the Gibbs sampler described by a JSON config");
  fit->add_option("--config", fo.config, "Config file")->required();
  fit->add_option("--seed", fo.seed, "Override the config seed");
  fit->add_option("--replicates", fo.replicates, "Independent chains, run concurrently");
  fit->add_option("--out", fo.out, "Output directory");

  DiagnoseOpts dopt;
  auto* diag = app.add_subcommand("diagnose", "Summaries, or IACT ratios against a second run");
  diag->add_option("--draws", dopt.draws, "Draws directory")->required();
  diag->add_option("--compare", dopt.compare, "Second draws directory; ratios are draws/compare");
  diag->add_option("--blocks", dopt.blocks, "Comma-separated blocks");
  diag->add_option("--method", dopt.method, "IACT estimator: geyer or ar");
  diag->add_option("--out", dopt.out, "Output directory");

  PredictOpts po;
  auto* pred = app.add_subcommand("predict", "Posterior-predictive probabilities per individual");
  pred->add_option("--draws", po.draws, "Draws directory")->required();
  pred->add_option("--bundle", po.bundles, "Outcomes of an at-least-one event, e.g. 3,4 (repeatable)");
  pred->add_option("--joint", po.joints, "Outcomes that must all be 1 (repeatable)");
  pred->add_option("--outcomes", po.outcomes, "Single-outcome columns (default all)");
  pred->add_option("--x", po.x, "Observation covariates incl. constant (default base case)");
  pred->add_option("--n-mc", po.n_mc, "Monte Carlo draws per posterior draw for joint events");
  pred->add_option("--seed", po.seed, "Random seed");
  pred->add_option("--out", po.out, "Output CSV file");

  GraphOpts go;
  auto* graph = app.add_subcommand("graph", "Signed conditional-independence graph");
  graph->add_option("--draws", go.draws, "Draws directory")->required();
  graph->add_option("--matrix", go.matrix, "R_inv or Sigma_alpha_inv");
  graph->add_option("--level", go.level, "Credible level");
  graph->add_option("--out", go.out, "Output directory");

  PriorStudyOpts pso;
  auto* ps = app.add_subcommand("prior-study", "Draws from the marginally uniform correlation prior");
  ps->add_option("--dim", pso.dim, "Dimension");
  ps->add_option("--nu", pso.nu, "Degrees of freedom (default dim + 1)");
  ps->add_option("--draws", pso.draws, "Number of draws");
  ps->add_option("--seed", pso.seed, "Random seed");
  ps->add_option("--out", pso.out, "Output directory");

  GewekeOpts gwo;
  auto* gw = app.add_subcommand("geweke-test", "Joint-distribution test of the Gibbs engine");
  gw->add_option("--beta-prior", gwo.beta_prior, "normal or horseshoe");
  gw->add_option("--sigma-prior", gwo.sigma_prior, "iw or hiw");
  gw->add_option("--beta-mode", gwo.beta_mode, "Proposal mode for beta");
  gw->add_option("--alpha-mode", gwo.alpha_mode, "Proposal mode for alpha");
  gw->add_option("--sweeps", gwo.sweeps, "Recorded sweeps over all chains");
  gw->add_option("--chains", gwo.chains, "Independent chains");
  gw->add_option("--prior-draws", gwo.prior_draws, "Independent prior draws");
  gw->add_option("--burn-in", gwo.burn_in, "Step-size tuning sweeps");
  gw->add_option("--fault-scale", gwo.fault, "Inflate independent alpha draws (mutation check)");
  gw->add_option("--seed", gwo.seed, "Random seed");
  gw->add_option("--out", gwo.out, "Output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    const CLI::App* target = &app;
    for (const CLI::App* sc : app.get_subcommands()) target = sc;
    std::cerr << "\n" << target->help();
    return 2;
  }

  try {
    if (*sim) return cmd_simulate(so);
    if (*fit) return cmd_fit(fo);
    if (*diag) return cmd_diagnose(dopt);
    if (*pred) return cmd_predict(po);
    if (*graph) return cmd_graph(go);
    if (*ps) return cmd_prior_study(pso);
    if (*gw) return cmd_geweke(gwo);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n" << app.help();
    return 2;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
