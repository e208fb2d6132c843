#include "mvp/graph.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace mvp {

namespace {

double quantile(std::vector<double> v, double p) {
  std::sort(v.begin(), v.end());
  const double h = (v.size() - 1) * p;
  const auto lo = static_cast<std::size_t>(h);
  const std::size_t hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (h - lo) * (v[hi] - v[lo]);
}

}  // namespace

std::vector<GraphEdge> extract_graph(const std::vector<Mat>& draws, double level) {
  if (draws.empty()) throw std::invalid_argument("graph extraction needs at least one draw");
  if (!(level > 0 && level < 1)) throw std::invalid_argument("credible level must lie in (0, 1)");
  const int d = static_cast<int>(draws.front().rows());
  const double tail = 0.5 * (1.0 - level);
  std::vector<GraphEdge> edges;
  std::vector<double> s(draws.size());
  for (int i = 1; i < d; ++i)
    for (int j = 0; j < i; ++j) {
      double sum = 0.0;
      for (std::size_t k = 0; k < draws.size(); ++k) {
        s[k] = draws[k](i, j);
        sum += s[k];
      }
      GraphEdge e{i, j, sum / draws.size(), quantile(s, tail), quantile(s, 1.0 - tail)};
      if (e.lower > 0 || e.upper < 0) edges.push_back(e);
    }
  return edges;
}

GraphMatrix parse_graph_matrix(const std::string& name) {
  if (name == "R_inv") return GraphMatrix::CorrInverse;
  if (name == "Sigma_alpha_inv") return GraphMatrix::SigmaAlphaInverse;
  throw std::invalid_argument("unknown matrix '" + name + "' (expected R_inv or Sigma_alpha_inv)");
}

std::vector<Mat> precision_draws(const ChainDraws& draws, GraphMatrix which) {
  std::vector<Mat> out;
  const int d = draws.n_outcomes;
  if (which == GraphMatrix::CorrInverse) {
    for (const auto& v : draws.corr_r)
      out.push_back(spd_inverse(symmetric_from_vechl(v, d, 1.0), "correlation draw"));
  } else {
    for (const auto& v : draws.sigma_alpha)
      out.push_back(spd_inverse(symmetric_from_vech(v, d), "Sigma_alpha draw"));
  }
  return out;
}

std::string graph_to_dot(const std::vector<GraphEdge>& edges, int dim,
                         const std::vector<std::string>& labels, const std::string& name) {
  std::ostringstream os;
  os << std::setprecision(17);
  os << "graph " << name << " {\n";
  for (int i = 0; i < dim; ++i) {
    os << "  n" << i + 1 << " [label=\""
       << (i < static_cast<int>(labels.size()) ? labels[i] : "y" + std::to_string(i + 1))
       << "\"];\n";
  }
  for (const auto& e : edges)
    os << "  n" << e.j + 1 << " -- n" << e.i + 1 << " [sign=" << (e.positive() ? "pos" : "neg")
       << ", weight=" << e.weight() << ", color=" << (e.positive() ? "blue" : "red") << "];\n";
  os << "}\n";
  return os.str();
}

std::string graph_to_csv(const std::vector<GraphEdge>& edges) {
  std::ostringstream os;
  os << std::setprecision(17) << "from,to,sign,weight,mean,lower,upper\n";
  for (const auto& e : edges)
    os << e.j + 1 << ',' << e.i + 1 << ',' << (e.positive() ? "pos" : "neg") << ',' << e.weight()
       << ',' << e.mean << ',' << e.lower << ',' << e.upper << '\n';
  return os.str();
}

}  // namespace mvp
