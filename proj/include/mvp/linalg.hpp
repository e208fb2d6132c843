#pragma once

#include <Eigen/Dense>

#include <string>

namespace mvp {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Strict lower triangle of a square matrix, vectorised by row
/// (row 2 first): (m10, m20, m21, m30, ...).
Vec vechl(const Mat& m);

/// Inverse of vechl: strictly lower-triangular matrix with `diagonal` on
/// the diagonal and zeros above.
Mat unvechl(const Vec& v, int dim, double diagonal = 0.0);

/// Symmetric matrix whose strict lower (and upper) triangle is `v` and whose
/// diagonal is `diagonal`.
Mat symmetric_from_vechl(const Vec& v, int dim, double diagonal);

/// Lower triangle including the diagonal, row by row.
Vec vech(const Mat& m);
Mat symmetric_from_vech(const Vec& v, int dim);

inline int vechl_size(int dim) { return dim * (dim - 1) / 2; }

/// Solves for the dimension D such that D(D-1)/2 == n. Throws if none exists.
int dim_from_vechl_size(int n);
int dim_from_vech_size(int n);

/// Inverse of a symmetric positive-definite matrix; throws
/// std::domain_error with `what` in the message when factorisation fails.
Mat spd_inverse(const Mat& m, const std::string& what = "matrix");

/// log|m| for symmetric positive-definite m via Cholesky.
double spd_log_det(const Mat& m, const std::string& what = "matrix");

/// Drops row and column k.
Mat drop_index(const Mat& m, int k);

}  // namespace mvp
