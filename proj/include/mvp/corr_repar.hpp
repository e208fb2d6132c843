#pragma once

// Unconstrained unit-diagonal Cholesky parameterisation of a correlation
// matrix, the marginally uniform prior on correlation matrices, and the
// analytic gradient of the conditional log-density used by NUTS.
//
// Notation: L is lower triangular with ones on the diagonal, Sigma = L L',
// Lambda = diag(Sigma), R = Lambda^{-1/2} Sigma Lambda^{-1/2}. Row i of L is
// l_i and ||l_i||^2 = 1 + sum_{j<i} L_ij^2.

#include "mvp/linalg.hpp"

#include <string>

namespace mvp {

/// Strictly lower-triangular entries of a unit-diagonal Cholesky factor,
/// stored as vechL (row-major, row 2 first).
class UnitCholesky {
 public:
  explicit UnitCholesky(int dim);  // identity
  UnitCholesky(int dim, Vec entries);

  int dim() const { return dim_; }
  const Vec& entries() const { return entries_; }
  Vec& entries() { return entries_; }

  /// Full D x D lower-triangular matrix with unit diagonal.
  Mat matrix() const;
  /// ||l_i|| for each row.
  Vec row_norms() const;

 private:
  int dim_;
  Vec entries_;
};

class CorrelationMatrix {
 public:
  /// Validates symmetry (1e-12), unit diagonal, |r_ij| < 1 and positive
  /// definiteness; throws std::invalid_argument otherwise.
  explicit CorrelationMatrix(Mat values);
  static CorrelationMatrix identity(int dim);

  int dim() const { return static_cast<int>(values_.rows()); }
  const Mat& values() const { return values_; }
  double operator()(int i, int j) const { return values_(i, j); }

 private:
  struct Unchecked {};
  CorrelationMatrix(Mat values, Unchecked) : values_(std::move(values)) {}
  friend CorrelationMatrix cholesky_to_corr(const UnitCholesky& l);

  Mat values_;
};

class CovarianceMatrix {
 public:
  /// Validates symmetry and positive definiteness.
  explicit CovarianceMatrix(Mat values);

  int dim() const { return static_cast<int>(values_.rows()); }
  const Mat& values() const { return values_; }

 private:
  Mat values_;
};

/// r_ij = (l_i . l_j) / (||l_i|| ||l_j||). Total on finite input.
CorrelationMatrix cholesky_to_corr(const UnitCholesky& l);

/// Standard Cholesky factor of R with every row rescaled by its diagonal.
/// Throws std::invalid_argument if R is not positive definite.
UnitCholesky corr_to_cholesky(const CorrelationMatrix& r);

/// Unnormalised log density of the marginally uniform prior:
/// (0.5 (nu-1)(D-1) - 1) log|R| - (nu/2) sum_i log|R(-i;-i)|.
double log_prior_corr(const CorrelationMatrix& r, double nu);

/// log|J| of vechL(L) -> vechL(R): -(D+1) sum_{k>=2} log ||l_k||.
double log_jacobian(const UnitCholesky& l);

/// log|R(L)| through the identity |R| = prod_k ||l_k||^{-2}.
double log_det_corr(const UnitCholesky& l);

/// Sufficient statistics of a set of residual vectors for the Gaussian
/// part of the conditional density: the scatter sum e e' and the count.
struct ResidualScatter {
  Mat scatter;
  long count = 0;

  /// Columns of `residuals` are the D-vectors.
  static ResidualScatter from_residuals(const Mat& residuals);
  static ResidualScatter empty(int dim);
};

/// sum log N(e; 0, R(L)) + log_prior_corr(R(L), nu) + log_jacobian(L).
double log_target_cholesky(const UnitCholesky& l, const ResidualScatter& resid, double nu);

/// Exact gradient of log_target_cholesky with respect to vechL(L).
Vec grad_log_target_cholesky(const UnitCholesky& l, const ResidualScatter& resid, double nu);

/// Value and gradient in one pass (shares the factorisations).
double log_target_and_grad(const UnitCholesky& l, const ResidualScatter& resid, double nu,
                           Vec& grad);

/// rho_kl = -P_kl / sqrt(P_kk P_ll) with P = R^{-1}; unit diagonal.
Mat corr_to_partial(const CorrelationMatrix& r);

/// Comma separated, 17 significant digits.
std::string format_vector(const Vec& v);
Vec parse_vector(const std::string& text);

}  // namespace mvp
