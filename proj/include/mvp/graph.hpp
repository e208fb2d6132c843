#pragma once

// Conditional-independence graphs from posterior draws of a precision
// matrix: an edge wherever the equal-tailed credible interval of the
// off-diagonal entry excludes zero.

#include "mvp/gibbs.hpp"

#include <string>
#include <vector>

namespace mvp {

struct GraphEdge {
  int i = 0;  // 0-based, i > j
  int j = 0;
  double mean = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  double weight() const { return std::abs(mean); }
  bool positive() const { return mean > 0; }
};

std::vector<GraphEdge> extract_graph(const std::vector<Mat>& draws, double level);

enum class GraphMatrix { CorrInverse, SigmaAlphaInverse };
GraphMatrix parse_graph_matrix(const std::string& name);  // "R_inv" | "Sigma_alpha_inv"

/// Per-draw precision matrices of the error correlation or random effects.
std::vector<Mat> precision_draws(const ChainDraws& draws, GraphMatrix which);

std::string graph_to_dot(const std::vector<GraphEdge>& edges, int dim,
                         const std::vector<std::string>& labels, const std::string& name);
std::string graph_to_csv(const std::vector<GraphEdge>& edges);

}  // namespace mvp
