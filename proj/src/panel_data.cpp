#include "mvp/panel_data.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace mvp {

using nlohmann::json;

void PanelData::validate() const {
  if (n_outcomes < 1 || n_individuals < 1 || n_periods < 1)
    throw std::invalid_argument("panel needs D, P and T all >= 1");
  if (y.size() != static_cast<std::size_t>(n_obs()) * n_outcomes)
    throw std::invalid_argument("outcome array has the wrong size");
  for (auto v : y)
    if (v > 1) throw std::invalid_argument("outcomes must be 0 or 1");
  if (x.rows() != n_obs() || x.cols() < 1)
    throw std::invalid_argument("covariate matrix must have P*T rows and >= 1 column");
  if (!x.allFinite()) throw std::invalid_argument("covariates must be finite");
  if ((x.col(0).array() != 1.0).any())
    throw std::invalid_argument("first covariate column must be the constant 1");
  if (z.size() > 0 && (z.rows() != n_individuals || !z.allFinite()))
    throw std::invalid_argument("individual covariates must be finite with P rows");
  if (!outcome_labels.empty() && static_cast<int>(outcome_labels.size()) != n_outcomes)
    throw std::invalid_argument("outcome label count differs from D");
  if (!covariate_labels.empty() && static_cast<int>(covariate_labels.size()) != x.cols())
    throw std::invalid_argument("covariate label count differs from K");
  if (!individual_labels.empty() && static_cast<int>(individual_labels.size()) != z.cols())
    throw std::invalid_argument("individual label count differs from G");
}

PanelData augment_individual_covariates(const PanelData& data) {
  PanelData out = data;
  const int g = static_cast<int>(data.z.cols());
  if (g == 0) return out;
  const int k = data.n_covariates();
  out.x.resize(data.n_obs(), k + g);
  out.x.leftCols(k) = data.x;
  for (int i = 0; i < data.n_individuals; ++i)
    for (int t = 0; t < data.n_periods; ++t) out.x.row(data.row(i, t)).tail(g) = data.z.row(i);
  out.covariate_labels = data.covariate_labels;
  if (out.covariate_labels.empty()) out.covariate_labels.resize(k);
  for (int j = 0; j < g; ++j)
    out.covariate_labels.push_back(j < static_cast<int>(data.individual_labels.size())
                                       ? data.individual_labels[j]
                                       : "z" + std::to_string(j + 1));
  out.z.resize(0, 0);
  out.individual_labels.clear();
  return out;
}

void CodebookSpec::validate() const {
  if (outcomes.empty()) throw std::invalid_argument("codebook lists no outcomes");
  std::set<std::string> seen;
  auto unique = [&](const std::string& name) {
    if (name.empty()) throw std::invalid_argument("codebook has an empty column name");
    if (!seen.insert(name).second)
      throw std::invalid_argument("codebook column '" + name + "' appears twice");
  };
  for (const auto& o : outcomes) unique(o);
  for (const auto& c : categorical) {
    unique(c.name);
    if (c.levels.size() < 2)
      throw std::invalid_argument("attribute '" + c.name + "' needs at least two levels");
    if (std::find(c.levels.begin(), c.levels.end(), c.base) == c.levels.end())
      throw std::invalid_argument("base level '" + c.base + "' of '" + c.name +
                                  "' is not one of its levels");
    std::set<std::string> lv(c.levels.begin(), c.levels.end());
    if (lv.size() != c.levels.size())
      throw std::invalid_argument("attribute '" + c.name + "' repeats a level");
  }
  for (const auto& n : numeric) unique(n.name);
}

std::vector<std::string> CodebookSpec::covariate_names() const {
  std::vector<std::string> names{"intercept"};
  for (const auto& c : categorical)
    for (const auto& l : c.levels)
      if (l != c.base) names.push_back(l);
  for (const auto& n : numeric)
    if (!n.individual_level) names.push_back(n.name);
  return names;
}

std::vector<std::string> CodebookSpec::individual_names() const {
  std::vector<std::string> names;
  for (const auto& n : numeric)
    if (n.individual_level) names.push_back(n.name);
  return names;
}

CodebookSpec CodebookSpec::from_json_text(const std::string& text) {
  CodebookSpec cb;
  try {
    const json j = json::parse(text);
    cb.outcomes = j.at("outcomes").get<std::vector<std::string>>();
    for (const auto& a : j.value("attributes", json::array())) {
      const std::string type = a.value("type", "categorical");
      if (type == "categorical") {
        cb.categorical.push_back({a.at("name").get<std::string>(),
                                  a.at("levels").get<std::vector<std::string>>(),
                                  a.at("base").get<std::string>()});
      } else if (type == "numeric") {
        const std::string scope = a.value("scope", "observation");
        if (scope != "observation" && scope != "individual")
          throw std::invalid_argument("numeric scope must be 'observation' or 'individual'");
        cb.numeric.push_back({a.at("name").get<std::string>(), scope == "individual"});
      } else {
        throw std::invalid_argument("unknown attribute type '" + type + "'");
      }
    }
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("malformed codebook: ") + e.what());
  }
  cb.validate();
  return cb;
}

std::string CodebookSpec::to_json_text() const {
  json j;
  j["outcomes"] = outcomes;
  j["attributes"] = json::array();
  for (const auto& c : categorical)
    j["attributes"].push_back(
        {{"name", c.name}, {"type", "categorical"}, {"levels", c.levels}, {"base", c.base}});
  for (const auto& n : numeric)
    j["attributes"].push_back({{"name", n.name},
                               {"type", "numeric"},
                               {"scope", n.individual_level ? "individual" : "observation"}});
  return j.dump(2) + "\n";
}

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void dump(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << text;
  if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

double parse_number(const std::string& s, const std::string& where) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos == 0 || pos != s.size() || !std::isfinite(v))
    throw std::invalid_argument(where + ": '" + s + "' is not a finite number");
  return v;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

CodebookSpec read_codebook(const std::string& path) { return CodebookSpec::from_json_text(slurp(path)); }

void write_codebook(const CodebookSpec& codebook, const std::string& path) {
  dump(path, codebook.to_json_text());
}

CodebookSpec numeric_codebook(const PanelData& data) {
  CodebookSpec cb;
  for (int d = 0; d < data.n_outcomes; ++d)
    cb.outcomes.push_back(d < static_cast<int>(data.outcome_labels.size()) ? data.outcome_labels[d]
                                                                           : "y" + std::to_string(d + 1));
  for (int k = 1; k < data.n_covariates(); ++k)
    cb.numeric.push_back({k < static_cast<int>(data.covariate_labels.size())
                              ? data.covariate_labels[k]
                              : "x" + std::to_string(k),
                          false});
  for (int g = 0; g < data.z.cols(); ++g)
    cb.numeric.push_back({g < static_cast<int>(data.individual_labels.size())
                              ? data.individual_labels[g]
                              : "z" + std::to_string(g + 1),
                          true});
  cb.validate();
  return cb;
}

int RawTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == name) return static_cast<int>(i);
  return -1;
}

RawTable parse_csv(const std::string& text) {
  RawTable t;
  std::istringstream in(text);
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) cells.push_back(trim(cell));
    if (line.back() == ',') cells.emplace_back();
    if (first) {
      t.header = std::move(cells);
      first = false;
    } else {
      if (cells.size() != t.header.size())
        throw std::invalid_argument("CSV row " + std::to_string(t.rows.size() + 1) + " has " +
                                    std::to_string(cells.size()) + " cells, header has " +
                                    std::to_string(t.header.size()));
      t.rows.push_back(std::move(cells));
    }
  }
  if (first) throw std::invalid_argument("CSV is empty");
  return t;
}

RawTable read_csv(const std::string& path) { return parse_csv(slurp(path)); }

EncodedCovariates encode_categoricals(const RawTable& raw, const CodebookSpec& codebook) {
  codebook.validate();
  EncodedCovariates out;
  out.names = codebook.covariate_names();
  const int n = static_cast<int>(raw.rows.size());
  out.x = Mat::Zero(n, static_cast<int>(out.names.size()));
  out.x.col(0).setOnes();
  int col = 1;
  for (const auto& attr : codebook.categorical) {
    const int c = raw.column(attr.name);
    if (c < 0) throw std::invalid_argument("missing attribute column '" + attr.name + "'");
    std::map<std::string, int> offset;
    int k = 0;
    for (const auto& l : attr.levels)
      if (l != attr.base) offset[l] = k++;
    for (int r = 0; r < n; ++r) {
      const std::string& v = raw.rows[r][c];
      if (v == attr.base) continue;
      auto it = offset.find(v);
      if (it == offset.end())
        throw std::invalid_argument("row " + std::to_string(r + 1) + ", attribute '" + attr.name +
                                    "': unknown level '" + v + "'");
      out.x(r, col + it->second) = 1.0;
    }
    col += k;
  }
  for (const auto& attr : codebook.numeric) {
    if (attr.individual_level) continue;
    const int c = raw.column(attr.name);
    if (c < 0) throw std::invalid_argument("missing attribute column '" + attr.name + "'");
    for (int r = 0; r < n; ++r)
      out.x(r, col) = parse_number(raw.rows[r][c], "row " + std::to_string(r + 1) + ", '" + attr.name + "'");
    ++col;
  }
  return out;
}

PanelData panel_from_table(const RawTable& raw, const CodebookSpec& codebook) {
  codebook.validate();
  const int c_id = raw.column("individual");
  const int c_t = raw.column("period");
  if (c_id < 0 || c_t < 0) throw std::invalid_argument("CSV needs 'individual' and 'period' columns");
  std::vector<int> c_y;
  for (const auto& o : codebook.outcomes) {
    const int c = raw.column(o);
    if (c < 0) throw std::invalid_argument("missing outcome column '" + o + "'");
    c_y.push_back(c);
  }
  const EncodedCovariates enc = encode_categoricals(raw, codebook);

  // Individuals in order of first appearance; periods sorted numerically.
  std::vector<std::string> ids;
  std::map<std::string, int> id_index;
  std::set<double> period_set;
  std::vector<double> period_of(raw.rows.size());
  for (std::size_t r = 0; r < raw.rows.size(); ++r) {
    const std::string& id = raw.rows[r][c_id];
    if (!id_index.count(id)) {
      id_index[id] = static_cast<int>(ids.size());
      ids.push_back(id);
    }
    period_of[r] = parse_number(raw.rows[r][c_t], "row " + std::to_string(r + 1) + ", 'period'");
    period_set.insert(period_of[r]);
  }
  const std::vector<double> periods(period_set.begin(), period_set.end());

  PanelData data;
  data.n_outcomes = static_cast<int>(codebook.outcomes.size());
  data.n_individuals = static_cast<int>(ids.size());
  data.n_periods = static_cast<int>(periods.size());
  if (raw.rows.size() != static_cast<std::size_t>(data.n_obs()))
    throw std::invalid_argument("panel is not balanced: " + std::to_string(raw.rows.size()) +
                                " rows for " + std::to_string(data.n_individuals) +
                                " individuals and " + std::to_string(data.n_periods) + " periods");
  data.outcome_labels = codebook.outcomes;
  data.covariate_labels = enc.names;
  data.individual_labels = codebook.individual_names();
  data.y.assign(static_cast<std::size_t>(data.n_obs()) * data.n_outcomes, 0);
  data.x.resize(data.n_obs(), enc.x.cols());
  const int g = static_cast<int>(data.individual_labels.size());
  data.z = Mat::Zero(g > 0 ? data.n_individuals : 0, g);
  std::vector<char> filled(data.n_obs(), 0);

  for (std::size_t r = 0; r < raw.rows.size(); ++r) {
    const int i = id_index[raw.rows[r][c_id]];
    const int t = static_cast<int>(std::lower_bound(periods.begin(), periods.end(), period_of[r]) -
                                   periods.begin());
    const int row = data.row(i, t);
    if (filled[row])
      throw std::invalid_argument("duplicate (individual, period) at row " + std::to_string(r + 1));
    filled[row] = 1;
    data.x.row(row) = enc.x.row(static_cast<int>(r));
    for (int d = 0; d < data.n_outcomes; ++d) {
      const std::string& v = raw.rows[r][c_y[d]];
      if (v != "0" && v != "1")
        throw std::invalid_argument("row " + std::to_string(r + 1) + ", outcome '" +
                                    codebook.outcomes[d] + "': expected 0 or 1, got '" + v + "'");
      data.y[static_cast<std::size_t>(row) * data.n_outcomes + d] = v == "1" ? 1 : 0;
    }
    int gi = 0;
    for (const auto& attr : codebook.numeric) {
      if (!attr.individual_level) continue;
      const int c = raw.column(attr.name);
      if (c < 0) throw std::invalid_argument("missing attribute column '" + attr.name + "'");
      const double v = parse_number(raw.rows[r][c], "row " + std::to_string(r + 1) + ", '" + attr.name + "'");
      data.z(i, gi++) = v;
    }
  }
  // Individual-level values must agree across that individual's rows.
  if (g > 0) {
    for (std::size_t r = 0; r < raw.rows.size(); ++r) {
      const int i = id_index[raw.rows[r][c_id]];
      int gi = 0;
      for (const auto& attr : codebook.numeric) {
        if (!attr.individual_level) continue;
        const double v = parse_number(raw.rows[r][raw.column(attr.name)], attr.name);
        if (v != data.z(i, gi++))
          throw std::invalid_argument("individual-level attribute '" + attr.name +
                                      "' varies within individual '" + raw.rows[r][c_id] + "'");
      }
    }
  }
  data.validate();
  return data;
}

PanelData read_panel_csv(const std::string& path, const CodebookSpec& codebook) {
  return panel_from_table(read_csv(path), codebook);
}

std::string panel_to_csv(const PanelData& data) {
  data.validate();
  const CodebookSpec cb = numeric_codebook(data);
  std::ostringstream os;
  os << std::setprecision(17);
  os << "individual,period";
  for (const auto& o : cb.outcomes) os << ',' << o;
  for (const auto& n : cb.numeric) os << ',' << n.name;
  os << '\n';
  for (int i = 0; i < data.n_individuals; ++i)
    for (int t = 0; t < data.n_periods; ++t) {
      os << (i + 1) << ',' << (t + 1);
      for (int d = 0; d < data.n_outcomes; ++d) os << ',' << static_cast<int>(data.y_at(i, t, d));
      for (int k = 1; k < data.n_covariates(); ++k) os << ',' << data.x(data.row(i, t), k);
      for (int g = 0; g < data.z.cols(); ++g) os << ',' << data.z(i, g);
      os << '\n';
    }
  return os.str();
}

void write_panel_csv(const PanelData& data, const std::string& path) { dump(path, panel_to_csv(data)); }

}  // namespace mvp
