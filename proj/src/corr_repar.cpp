#include "mvp/corr_repar.hpp"

#include <cmath>
#include <iomanip>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace mvp {

UnitCholesky::UnitCholesky(int dim) : dim_(dim), entries_(Vec::Zero(vechl_size(dim))) {
  if (dim < 1) throw std::invalid_argument("UnitCholesky: dimension must be >= 1");
}

UnitCholesky::UnitCholesky(int dim, Vec entries) : dim_(dim), entries_(std::move(entries)) {
  if (dim < 1) throw std::invalid_argument("UnitCholesky: dimension must be >= 1");
  if (entries_.size() != vechl_size(dim))
    throw std::invalid_argument("UnitCholesky: expected " + std::to_string(vechl_size(dim)) +
                                " entries, got " + std::to_string(entries_.size()));
  if (!entries_.allFinite()) throw std::invalid_argument("UnitCholesky: non-finite entry");
}

Mat UnitCholesky::matrix() const { return unvechl(entries_, dim_, 1.0); }

Vec UnitCholesky::row_norms() const {
  Vec n = Vec::Ones(dim_);
  int idx = 0;
  for (int i = 1; i < dim_; ++i) {
    double s = 1.0;
    for (int j = 0; j < i; ++j, ++idx) s += entries_[idx] * entries_[idx];
    n[i] = std::sqrt(s);
  }
  return n;
}

CorrelationMatrix::CorrelationMatrix(Mat values) : values_(std::move(values)) {
  const int d = static_cast<int>(values_.rows());
  if (d < 1 || values_.cols() != d)
    throw std::invalid_argument("correlation matrix must be square and non-empty");
  if (!values_.allFinite()) throw std::invalid_argument("correlation matrix has non-finite entries");
  for (int i = 0; i < d; ++i) {
    if (std::abs(values_(i, i) - 1.0) > 1e-12)
      throw std::invalid_argument("correlation matrix diagonal must be 1");
    values_(i, i) = 1.0;
    for (int j = 0; j < i; ++j) {
      if (std::abs(values_(i, j) - values_(j, i)) > 1e-12)
        throw std::invalid_argument("correlation matrix is not symmetric");
      if (std::abs(values_(i, j)) >= 1.0)
        throw std::invalid_argument("correlation entries must lie in (-1, 1)");
      values_(j, i) = values_(i, j);
    }
  }
  Eigen::LLT<Mat> llt(values_);
  if (llt.info() != Eigen::Success)
    throw std::invalid_argument("invalid correlation matrix: not positive definite");
}

CorrelationMatrix CorrelationMatrix::identity(int dim) {
  return CorrelationMatrix(Mat::Identity(dim, dim), Unchecked{});
}

CovarianceMatrix::CovarianceMatrix(Mat values) : values_(std::move(values)) {
  const int d = static_cast<int>(values_.rows());
  if (d < 1 || values_.cols() != d) throw std::invalid_argument("covariance matrix must be square");
  if (!values_.allFinite()) throw std::invalid_argument("covariance matrix has non-finite entries");
  const double scale = values_.cwiseAbs().maxCoeff();
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < i; ++j)
      if (std::abs(values_(i, j) - values_(j, i)) > 1e-12 * std::max(1.0, scale))
        throw std::invalid_argument("covariance matrix is not symmetric");
  Eigen::LLT<Mat> llt(values_);
  if (llt.info() != Eigen::Success)
    throw std::invalid_argument("covariance matrix is not positive definite");
}

CorrelationMatrix cholesky_to_corr(const UnitCholesky& l) {
  const int d = l.dim();
  const Mat lm = l.matrix();
  const Vec n = l.row_norms();
  Mat r(d, d);
  for (int i = 0; i < d; ++i) {
    r(i, i) = 1.0;
    for (int j = 0; j < i; ++j) {
      const double v = lm.row(i).head(j + 1).dot(lm.row(j).head(j + 1)) / (n[i] * n[j]);
      r(i, j) = v;
      r(j, i) = v;
    }
  }
  return CorrelationMatrix(std::move(r), CorrelationMatrix::Unchecked{});
}

UnitCholesky corr_to_cholesky(const CorrelationMatrix& r) {
  Eigen::LLT<Mat> llt(r.values());
  if (llt.info() != Eigen::Success)
    throw std::invalid_argument("invalid correlation matrix: not positive definite");
  Mat c = llt.matrixL();
  for (int i = 0; i < c.rows(); ++i) c.row(i) /= c(i, i);
  return UnitCholesky(r.dim(), vechl(c));
}

double log_prior_corr(const CorrelationMatrix& r, double nu) {
  const int d = r.dim();
  if (d == 1) return 0.0;
  const double log_det = spd_log_det(r.values(), "correlation matrix");
  double sub = 0.0;
  for (int k = 0; k < d; ++k)
    sub += spd_log_det(drop_index(r.values(), k), "principal submatrix of correlation matrix");
  return (0.5 * (nu - 1.0) * (d - 1) - 1.0) * log_det - 0.5 * nu * sub;
}

double log_jacobian(const UnitCholesky& l) {
  const Vec n = l.row_norms();
  return -(l.dim() + 1.0) * n.array().log().sum();
}

double log_det_corr(const UnitCholesky& l) {
  return -2.0 * l.row_norms().array().log().sum();
}

ResidualScatter ResidualScatter::from_residuals(const Mat& residuals) {
  return {residuals * residuals.transpose(), static_cast<long>(residuals.cols())};
}

ResidualScatter ResidualScatter::empty(int dim) { return {Mat::Zero(dim, dim), 0}; }

namespace {

constexpr double kLog2Pi = 1.8378770664093454836;

void check_scatter(const UnitCholesky& l, const ResidualScatter& resid) {
  if (resid.scatter.rows() != l.dim() || resid.scatter.cols() != l.dim())
    throw std::invalid_argument("residual dimension does not match correlation dimension");
}

}  // namespace

double log_target_cholesky(const UnitCholesky& l, const ResidualScatter& resid, double nu) {
  check_scatter(l, resid);
  const int d = l.dim();
  const CorrelationMatrix r = cholesky_to_corr(l);
  Eigen::LLT<Mat> llt(r.values());
  if (llt.info() != Eigen::Success)
    throw std::domain_error("correlation matrix is numerically singular");
  double log_det = 0.0;
  for (int i = 0; i < d; ++i) log_det += 2.0 * std::log(llt.matrixLLT()(i, i));
  const double quad = (llt.solve(resid.scatter)).trace();
  const double n = static_cast<double>(resid.count);
  const double loglik = -0.5 * n * d * kLog2Pi - 0.5 * n * log_det - 0.5 * quad;
  const double value = loglik + log_prior_corr(r, nu) + log_jacobian(l);
  if (!std::isfinite(value)) throw std::domain_error("log target is not finite");
  return value;
}

double log_target_and_grad(const UnitCholesky& l, const ResidualScatter& resid, double nu,
                           Vec& grad) {
  check_scatter(l, resid);
  const int d = l.dim();
  grad.setZero(vechl_size(d));
  const double n_obs = static_cast<double>(resid.count);
  if (d == 1) return -0.5 * n_obs * kLog2Pi - 0.5 * resid.scatter(0, 0);

  const Mat lm = l.matrix();
  const Vec norms = l.row_norms();
  const Mat r = cholesky_to_corr(l).values();

  Eigen::LLT<Mat> llt(r);
  if (llt.info() != Eigen::Success)
    throw std::domain_error("correlation matrix is numerically singular");
  const Mat q = llt.solve(Mat::Identity(d, d));
  const double log_det = log_det_corr(l);

  // G holds d f / d R for the parts of f that are not functions of log|R|:
  // the quadratic form and the principal-submatrix determinants.
  const Mat qs = q * resid.scatter;
  Mat g = 0.5 * qs * q;
  double log_det_sub = 0.0;
  for (int k = 0; k < d; ++k) {
    const Mat sub = drop_index(r, k);
    Eigen::LLT<Mat> sub_llt(sub);
    if (sub_llt.info() != Eigen::Success)
      throw std::domain_error("principal submatrix of correlation matrix is singular");
    for (int i = 0; i < d - 1; ++i) log_det_sub += 2.0 * std::log(sub_llt.matrixLLT()(i, i));
    const Mat sub_inv = sub_llt.solve(Mat::Identity(d - 1, d - 1));
    for (int i = 0, si = 0; i < d; ++i) {
      if (i == k) continue;
      for (int j = 0, sj = 0; j < d; ++j) {
        if (j == k) continue;
        g(i, j) -= 0.5 * nu * sub_inv(si, sj++);
      }
      ++si;
    }
  }

  // Coefficient on log|R| collected from the likelihood, the prior and the
  // Jacobian (log|J| = (D+1)/2 log|R|).
  const double c_prior = 0.5 * (nu - 1.0) * (d - 1) - 1.0;
  const double c_logdet = -0.5 * n_obs + c_prior + 0.5 * (d + 1.0);

  const double value = -0.5 * n_obs * d * kLog2Pi + c_logdet * log_det - 0.5 * qs.trace() -
                       0.5 * nu * log_det_sub;

  // dR_ib/dL_ij = L_bj / (n_i n_b) - R_ib L_ij / n_i^2, and d log|R| / dL_ij =
  // -2 L_ij / n_i^2.
  const Mat h = g * norms.cwiseInverse().asDiagonal() * lm;
  const Vec gr = (g.cwiseProduct(r)).rowwise().sum();
  int idx = 0;
  for (int i = 1; i < d; ++i) {
    const double ni2 = norms[i] * norms[i];
    for (int j = 0; j < i; ++j, ++idx) {
      const double lij = lm(i, j);
      grad[idx] = 2.0 * h(i, j) / norms[i] - 2.0 * lij * gr[i] / ni2 - 2.0 * c_logdet * lij / ni2;
    }
  }
  if (!std::isfinite(value) || !grad.allFinite())
    throw std::domain_error("log target or gradient is not finite");
  return value;
}

Vec grad_log_target_cholesky(const UnitCholesky& l, const ResidualScatter& resid, double nu) {
  Vec grad;
  log_target_and_grad(l, resid, nu, grad);
  return grad;
}

Mat corr_to_partial(const CorrelationMatrix& r) {
  const Mat p = spd_inverse(r.values(), "correlation matrix");
  const int d = r.dim();
  Mat rho(d, d);
  for (int k = 0; k < d; ++k) {
    rho(k, k) = 1.0;
    for (int l = 0; l < k; ++l) {
      const double v = -p(k, l) / std::sqrt(p(k, k) * p(l, l));
      rho(k, l) = v;
      rho(l, k) = v;
    }
  }
  return rho;
}

std::string format_vector(const Vec& v) {
  std::ostringstream os;
  os << std::setprecision(17);
  for (int i = 0; i < v.size(); ++i) {
    if (i) os << ',';
    os << v[i];
  }
  return os.str();
}

Vec parse_vector(const std::string& text) {
  std::vector<double> vals;
  std::istringstream is(text);
  std::string tok;
  while (std::getline(is, tok, ',')) {
    std::size_t pos = 0;
    double x = 0.0;
    try {
      x = std::stod(tok, &pos);
    } catch (const std::exception&) {
      throw std::invalid_argument("not a number: '" + tok + "'");
    }
    while (pos < tok.size() && std::isspace(static_cast<unsigned char>(tok[pos]))) ++pos;
    if (pos != tok.size()) throw std::invalid_argument("not a number: '" + tok + "'");
    vals.push_back(x);
  }
  return Eigen::Map<Vec>(vals.data(), static_cast<Eigen::Index>(vals.size()));
}

}  // namespace mvp
