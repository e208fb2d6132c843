#include "mvp/draws_io.hpp"

#include "mvp/panel_data.hpp"

#include <json.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace mvp {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

constexpr const char* kFormat = "mvprobit-draws/1";

const Block kStored[] = {Block::Beta,           Block::CholL,     Block::CorrR,
                         Block::DiagSigmaAlpha, Block::CorrAlpha, Block::SigmaAlpha,
                         Block::Alpha,          Block::YStar};

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw std::runtime_error("write failed for '" + path.string() + "'");
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<Vec> parse_block(const fs::path& path, std::size_t expected_cols) {
  const RawTable t = parse_csv(read_file(path));
  if (expected_cols && t.header.size() != expected_cols)
    throw std::runtime_error("'" + path.string() + "' has " + std::to_string(t.header.size()) +
                             " columns, expected " + std::to_string(expected_cols));
  std::vector<Vec> rows;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    Vec v(static_cast<int>(t.rows[r].size()));
    for (std::size_t c = 0; c < t.rows[r].size(); ++c) {
      std::size_t pos = 0;
      try {
        v[static_cast<int>(c)] = std::stod(t.rows[r][c], &pos);
      } catch (const std::exception&) {
        pos = 0;
      }
      if (pos == 0 || pos != t.rows[r][c].size())
        throw std::runtime_error("'" + path.string() + "' row " + std::to_string(r + 2) +
                                 ": bad number '" + t.rows[r][c] + "'");
    }
    rows.push_back(std::move(v));
  }
  return rows;
}

}  // namespace

std::string block_csv(const ChainDraws& draws, Block b) {
  std::ostringstream os;
  os << std::setprecision(17);
  const auto names = draws.column_names(b);
  for (std::size_t i = 0; i < names.size(); ++i) os << (i ? "," : "") << names[i];
  os << '\n';
  for (const Vec& row : draws.block(b)) {
    for (int i = 0; i < row.size(); ++i) os << (i ? "," : "") << row[i];
    os << '\n';
  }
  return os.str();
}

std::string spec_to_json(const ModelSpec& spec) {
  json j;
  j["n_outcomes"] = spec.n_outcomes;
  j["n_covariates"] = spec.n_covariates;
  j["n_individual"] = spec.n_individual;
  j["beta_prior"] = spec.priors.beta == BetaPriorKind::Normal ? "normal" : "horseshoe";
  j["beta_variance"] = spec.priors.beta_variance;
  j["intercept_variance"] = spec.priors.intercept_variance;
  j["sigma_alpha_prior"] = spec.priors.sigma_alpha == SigmaAlphaPriorKind::InverseWishart ? "iw" : "hiw";
  j["iw_df"] = spec.iw_df();
  j["hiw_df"] = spec.priors.hiw_df;
  const Vec a = spec.hiw_scales();
  j["hiw_scales"] = std::vector<double>(a.data(), a.data() + a.size());
  j["corr_nu"] = spec.corr_nu();
  return j.dump();
}

void write_chain(const std::string& directory, const ChainDraws& draws, const DrawsHeader& header) {
  const fs::path dir(directory);
  fs::create_directories(dir);
  json h;
  h["format"] = kFormat;
  h["method"] = draws.method;
  h["seed"] = draws.seed;
  h["n_outcomes"] = draws.n_outcomes;
  h["coef_per_outcome"] = draws.coef_per_outcome;
  h["n_individuals"] = draws.n_individuals;
  h["n_draws"] = draws.size();
  h["beta_names"] = draws.beta_names;
  h["outcome_labels"] = header.outcome_labels;
  h["total_divergences"] = draws.total_divergences;
  h["iterations_run"] = draws.iterations_run;
  h["timing"] = {{"seconds_total", draws.seconds_total},
                 {"seconds_per_iteration", draws.seconds_per_iteration()}};
  h["config"] = header.config_json.empty() ? json(nullptr) : json::parse(header.config_json);
  h["spec"] = header.spec_json.empty() ? json(nullptr) : json::parse(header.spec_json);
  // Zero-width blocks (D = 1 correlations) are not written.
  auto stored = [&](Block b) { return !draws.block(b).empty() && draws.block(b).front().size() > 0; };
  std::vector<std::string> files;
  for (Block b : kStored)
    if (stored(b)) files.push_back(block_name(b) + ".csv");
  h["files"] = files;
  write_file(dir / "header.json", h.dump(2) + "\n");

  for (Block b : kStored)
    if (stored(b)) write_file(dir / (block_name(b) + ".csv"), block_csv(draws, b));

  std::ostringstream os;
  os << std::setprecision(17) << "divergent,accept_stat,step_size,tree_depth\n";
  for (std::size_t i = 0; i < draws.divergent.size(); ++i)
    os << draws.divergent[i] << ',' << draws.accept_stat[i] << ',' << draws.step_size[i] << ','
       << draws.tree_depth[i] << '\n';
  write_file(dir / "sampler.csv", os.str());
}

ChainDraws read_chain(const std::string& directory, DrawsHeader* header) {
  const fs::path dir(directory);
  json h;
  try {
    h = json::parse(read_file(dir / "header.json"));
  } catch (const json::exception& e) {
    throw std::runtime_error("malformed header.json in '" + directory + "': " + e.what());
  }
  if (h.value("format", "") != kFormat)
    throw std::runtime_error("'" + directory + "' is not a draws directory");
  ChainDraws d;
  try {
    d.method = h.at("method").get<std::string>();
    d.seed = h.at("seed").get<std::uint64_t>();
    d.n_outcomes = h.at("n_outcomes").get<int>();
    d.coef_per_outcome = h.at("coef_per_outcome").get<int>();
    d.n_individuals = h.at("n_individuals").get<int>();
    d.beta_names = h.at("beta_names").get<std::vector<std::string>>();
    d.total_divergences = h.at("total_divergences").get<long>();
    d.iterations_run = h.at("iterations_run").get<int>();
    d.seconds_total = h.at("timing").at("seconds_total").get<double>();
    if (header) {
      header->outcome_labels = h.at("outcome_labels").get<std::vector<std::string>>();
      header->config_json = h["config"].is_null() ? "" : h["config"].dump();
      header->spec_json = h["spec"].is_null() ? "" : h["spec"].dump();
    }
  } catch (const json::exception& e) {
    throw std::runtime_error("header.json in '" + directory + "': " + e.what());
  }
  const auto files = h.value("files", std::vector<std::string>{});
  const int dd = d.n_outcomes;
  for (Block b : kStored) {
    const std::string name = block_name(b) + ".csv";
    if (std::find(files.begin(), files.end(), name) == files.end()) continue;
    std::size_t cols = 0;
    switch (b) {
      case Block::Beta: cols = static_cast<std::size_t>(dd * d.coef_per_outcome); break;
      case Block::CholL:
      case Block::CorrR:
      case Block::CorrAlpha: cols = static_cast<std::size_t>(vechl_size(dd)); break;
      case Block::DiagSigmaAlpha: cols = static_cast<std::size_t>(dd); break;
      case Block::SigmaAlpha: cols = static_cast<std::size_t>(dd * (dd + 1) / 2); break;
      case Block::Alpha: cols = static_cast<std::size_t>(dd * d.n_individuals); break;
      case Block::YStar: cols = 0; break;
    }
    d.block(b) = parse_block(dir / name, cols);
  }
  const auto s = parse_block(dir / "sampler.csv", 4);
  for (const Vec& r : s) {
    d.divergent.push_back(static_cast<int>(r[0]));
    d.accept_stat.push_back(r[1]);
    d.step_size.push_back(r[2]);
    d.tree_depth.push_back(static_cast<int>(r[3]));
  }
  if (d.beta.size() != d.divergent.size() || (!d.corr_r.empty() && d.corr_r.size() != d.beta.size()))
    throw std::runtime_error("draw files in '" + directory + "' disagree on the number of draws");
  return d;
}

}  // namespace mvp
