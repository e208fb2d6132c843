#include "mvp/linalg.hpp"

#include <cmath>
#include <stdexcept>

namespace mvp {

Vec vechl(const Mat& m) {
  const int d = static_cast<int>(m.rows());
  Vec out(vechl_size(d));
  int idx = 0;
  for (int i = 1; i < d; ++i)
    for (int j = 0; j < i; ++j) out[idx++] = m(i, j);
  return out;
}

Mat unvechl(const Vec& v, int dim, double diagonal) {
  if (v.size() != vechl_size(dim))
    throw std::invalid_argument("unvechl: length does not match dimension");
  Mat m = Mat::Zero(dim, dim);
  m.diagonal().setConstant(diagonal);
  int idx = 0;
  for (int i = 1; i < dim; ++i)
    for (int j = 0; j < i; ++j) m(i, j) = v[idx++];
  return m;
}

Mat symmetric_from_vechl(const Vec& v, int dim, double diagonal) {
  Mat m = unvechl(v, dim, diagonal);
  for (int i = 1; i < dim; ++i)
    for (int j = 0; j < i; ++j) m(j, i) = m(i, j);
  return m;
}

Vec vech(const Mat& m) {
  const int d = static_cast<int>(m.rows());
  Vec out(d * (d + 1) / 2);
  int idx = 0;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j <= i; ++j) out[idx++] = m(i, j);
  return out;
}

Mat symmetric_from_vech(const Vec& v, int dim) {
  if (v.size() != dim * (dim + 1) / 2)
    throw std::invalid_argument("symmetric_from_vech: length does not match dimension");
  Mat m(dim, dim);
  int idx = 0;
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j <= i; ++j) {
      m(i, j) = v[idx];
      m(j, i) = v[idx];
      ++idx;
    }
  return m;
}

int dim_from_vechl_size(int n) {
  const int d = static_cast<int>(std::lround((1.0 + std::sqrt(1.0 + 8.0 * n)) / 2.0));
  if (vechl_size(d) != n) throw std::invalid_argument("vechL length is not triangular");
  return d;
}

int dim_from_vech_size(int n) {
  const int d = static_cast<int>(std::lround((-1.0 + std::sqrt(1.0 + 8.0 * n)) / 2.0));
  if (d * (d + 1) / 2 != n) throw std::invalid_argument("vech length is not triangular");
  return d;
}

Mat spd_inverse(const Mat& m, const std::string& what) {
  Eigen::LLT<Mat> llt(m);
  if (llt.info() != Eigen::Success)
    throw std::domain_error(what + " is not positive definite");
  return llt.solve(Mat::Identity(m.rows(), m.cols()));
}

double spd_log_det(const Mat& m, const std::string& what) {
  Eigen::LLT<Mat> llt(m);
  if (llt.info() != Eigen::Success)
    throw std::domain_error(what + " is not positive definite");
  const Mat& l = llt.matrixLLT();
  double s = 0.0;
  for (int i = 0; i < l.rows(); ++i) s += std::log(l(i, i));
  return 2.0 * s;
}

Mat drop_index(const Mat& m, int k) {
  const int d = static_cast<int>(m.rows());
  Mat out(d - 1, d - 1);
  for (int i = 0, oi = 0; i < d; ++i) {
    if (i == k) continue;
    for (int j = 0, oj = 0; j < d; ++j) {
      if (j == k) continue;
      out(oi, oj++) = m(i, j);
    }
    ++oi;
  }
  return out;
}

}  // namespace mvp
