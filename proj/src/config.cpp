#include "mvp/config.hpp"

#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

namespace mvp {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

void check_keys(const json& obj, const std::string& where, const std::set<std::string>& allowed) {
  if (!obj.is_object()) throw ConfigError("'" + where + "' must be an object");
  for (const auto& [key, value] : obj.items())
    if (!allowed.count(key)) throw ConfigError("unknown key '" + where + "." + key + "'");
}

template <class T>
T get(const json& obj, const std::string& where, const std::string& key, T fallback) {
  if (!obj.contains(key)) return fallback;
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError("'" + where + "." + key + "' has the wrong type");
  }
}

Vec get_vector(const json& obj, const std::string& where, const std::string& key) {
  const auto v = get<std::vector<double>>(obj, where, key, {});
  return Eigen::Map<const Vec>(v.data(), static_cast<Eigen::Index>(v.size()));
}

Mat get_matrix(const json& obj, const std::string& where, const std::string& key) {
  const auto rows = get<std::vector<std::vector<double>>>(obj, where, key, {});
  Mat m(static_cast<int>(rows.size()), rows.empty() ? 0 : static_cast<int>(rows[0].size()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (static_cast<int>(rows[r].size()) != m.cols())
      throw ConfigError("'" + where + "." + key + "' rows differ in length");
    for (std::size_t c = 0; c < rows[r].size(); ++c) m(static_cast<int>(r), static_cast<int>(c)) = rows[r][c];
  }
  return m;
}

ProposalMode get_mode(const json& obj, const std::string& key, ProposalMode fallback) {
  if (!obj.contains(key)) return fallback;
  try {
    return parse_proposal_mode(get<std::string>(obj, "sampler", key, ""));
  } catch (const std::invalid_argument& e) {
    throw ConfigError("sampler." + key + ": " + e.what());
  }
}

std::string resolve(const std::string& path, const std::string& base_dir) {
  if (path.empty() || base_dir.empty() || fs::path(path).is_absolute()) return path;
  return (fs::path(base_dir) / path).string();
}

}  // namespace

std::string default_output_root() {
  const char* env = std::getenv("MVPROBIT_OUTPUT_ROOT");
  return env && *env ? std::string(env) : std::string(".");
}

FitConfig FitConfig::from_json_text(const std::string& text, const std::string& base_dir) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  check_keys(j, "config", {"data", "model", "priors", "sampler", "hmc", "seed", "replicates", "output"});
  FitConfig c;
  c.source_text = j.dump();

  if (!j.contains("data")) throw ConfigError("missing 'data' section");
  const json& data = j["data"];
  check_keys(data, "data", {"panel", "codebook"});
  c.panel_path = resolve(get<std::string>(data, "data", "panel", ""), base_dir);
  if (c.panel_path.empty()) throw ConfigError("'data.panel' is required");
  c.codebook_path = resolve(get<std::string>(data, "data", "codebook", ""), base_dir);

  if (j.contains("model")) {
    const json& m = j["model"];
    check_keys(m, "model", {"type", "px_comparison"});
    c.model = get<int>(m, "model", "type", 1);
    c.px_comparison = get<bool>(m, "model", "px_comparison", false);
  }
  if (c.model != 1 && c.model != 2) throw ConfigError("'model.type' must be 1 or 2");

  if (j.contains("priors")) {
    const json& p = j["priors"];
    check_keys(p, "priors", {"beta", "beta_variance", "individual_variance", "intercept_variance",
                             "sigma_alpha", "iw_df", "iw_scale", "hiw_df", "hiw_scales", "corr_nu"});
    const auto beta = get<std::string>(p, "priors", "beta", "normal");
    if (beta == "normal") c.priors.beta = BetaPriorKind::Normal;
    else if (beta == "horseshoe") c.priors.beta = BetaPriorKind::Horseshoe;
    else throw ConfigError("'priors.beta' must be normal or horseshoe");
    const auto sa = get<std::string>(p, "priors", "sigma_alpha", "iw");
    if (sa == "iw") c.priors.sigma_alpha = SigmaAlphaPriorKind::InverseWishart;
    else if (sa == "hiw") c.priors.sigma_alpha = SigmaAlphaPriorKind::Hierarchical;
    else throw ConfigError("'priors.sigma_alpha' must be iw or hiw");
    c.priors.beta_variance = get<double>(p, "priors", "beta_variance", c.priors.beta_variance);
    if (p.contains("individual_variance"))
      c.priors.individual_variance = get<double>(p, "priors", "individual_variance", 0.0);
    c.priors.intercept_variance = get<double>(p, "priors", "intercept_variance", c.priors.intercept_variance);
    if (p.contains("iw_df")) c.priors.iw_df = get<double>(p, "priors", "iw_df", 0.0);
    if (p.contains("iw_scale")) c.priors.iw_scale = get_matrix(p, "priors", "iw_scale");
    c.priors.hiw_df = get<double>(p, "priors", "hiw_df", c.priors.hiw_df);
    if (p.contains("hiw_scales")) c.priors.hiw_scales = get_vector(p, "priors", "hiw_scales");
    if (p.contains("corr_nu")) c.priors.corr_nu = get<double>(p, "priors", "corr_nu", 0.0);
  }

  SamplerConfig& s = c.sampler;
  if (j.contains("sampler")) {
    const json& sj = j["sampler"];
    check_keys(sj, "sampler", {"iterations", "burn_in", "thin", "beta_mode", "alpha_mode", "switch_on",
                               "store_alpha", "store_ystar"});
    s.iterations = get<int>(sj, "sampler", "iterations", s.iterations);
    s.burn_in = get<int>(sj, "sampler", "burn_in", s.burn_in);
    s.thin = get<int>(sj, "sampler", "thin", s.thin);
    s.beta_mode = get_mode(sj, "beta_mode", s.beta_mode);
    s.alpha_mode = get_mode(sj, "alpha_mode", s.alpha_mode);
    if (sj.contains("switch_on")) s.switch_on = get<int>(sj, "sampler", "switch_on", 0);
    s.store_alpha = get<bool>(sj, "sampler", "store_alpha", s.store_alpha);
    s.store_ystar = get<int>(sj, "sampler", "store_ystar", s.store_ystar);
  }
  if (j.contains("hmc")) {
    const json& h = j["hmc"];
    check_keys(h, "hmc", {"adapt", "step_size", "target_accept", "max_depth", "max_delta_h", "inv_mass",
                          "gamma", "t0", "kappa"});
    s.adapt_step_size = get<bool>(h, "hmc", "adapt", s.adapt_step_size);
    if (h.contains("step_size")) {
      s.hmc.step_size = get<double>(h, "hmc", "step_size", 1.0);
      s.hmc.step_size_initialised = true;
      s.hmc.restart();
    }
    s.hmc.target_accept = get<double>(h, "hmc", "target_accept", s.hmc.target_accept);
    s.hmc.max_depth = get<int>(h, "hmc", "max_depth", s.hmc.max_depth);
    s.hmc.max_delta_h = get<double>(h, "hmc", "max_delta_h", s.hmc.max_delta_h);
    if (h.contains("inv_mass")) s.hmc.inv_mass = get_vector(h, "hmc", "inv_mass");
    s.hmc.gamma = get<double>(h, "hmc", "gamma", s.hmc.gamma);
    s.hmc.t0 = get<double>(h, "hmc", "t0", s.hmc.t0);
    s.hmc.kappa = get<double>(h, "hmc", "kappa", s.hmc.kappa);
  }
  s.seed = get<std::uint64_t>(j, "config", "seed", s.seed);
  c.replicates = get<int>(j, "config", "replicates", 1);
  if (c.replicates < 1) throw ConfigError("'replicates' must be >= 1");
  if (j.contains("output")) {
    const json& o = j["output"];
    check_keys(o, "output", {"directory"});
    c.output_directory = resolve(get<std::string>(o, "output", "directory", ""), base_dir);
  }

  try {
    s.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("sampler: ") + e.what());
  }
  if (!s.adapt_step_size && !s.hmc.step_size_initialised)
    throw ConfigError("'hmc.step_size' is required when adaptation is off");
  return c;
}

FitConfig FitConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return from_json_text(ss.str(), fs::path(path).parent_path().string());
}

std::string FitConfig::to_json_text() const { return source_text; }

PanelData load_fit_panel(const FitConfig& cfg) {
  std::string codebook = cfg.codebook_path;
  if (codebook.empty()) codebook = (fs::path(cfg.panel_path).parent_path() / "codebook.json").string();
  if (!fs::exists(codebook)) throw ConfigError("codebook '" + codebook + "' not found");
  if (!fs::exists(cfg.panel_path)) throw ConfigError("panel '" + cfg.panel_path + "' not found");
  return read_panel_csv(cfg.panel_path, read_codebook(codebook));
}

}  // namespace mvp
