#include "aebt/transforms.hpp"

#include <cmath>

#include "aebt/errors.hpp"

namespace aebt {

namespace {

// x^alpha as exp(alpha log x) for x > 0, exact 0 at x = 0 (alpha > 0 only;
// callers gate the alpha <= 0 case).
inline double pow_alpha(double x, double alpha) {
  return x > 0.0 ? std::exp(alpha * std::log(x)) : 0.0;
}

Eigen::VectorXd u_alpha_row(const Eigen::VectorXd& x, double alpha) {
  Eigen::VectorXd u(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) u[i] = pow_alpha(x[i], alpha);
  return u / u.sum();
}

Eigen::VectorXd clr_row(const Eigen::VectorXd& x) {
  Eigen::VectorXd logs = x.array().log().matrix();
  const double log_gmean = logs.mean();
  return logs.array() - log_gmean;
}

}  // namespace

namespace detail {

void require_alpha_compatible(const Eigen::MatrixXd& rows, double alpha) {
  if (alpha <= 0.0 && (rows.array() <= 0.0).any())
    throw input_error("alpha must be positive with zeros in the data");
}

Eigen::MatrixXd scaled_row_distances(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                                     double scale) {
  // Transposed copies keep each row contiguous in the pair loop.
  const Eigen::MatrixXd At = A.transpose();
  const Eigen::MatrixXd Bt = B.transpose();
  Eigen::MatrixXd dist(A.rows(), B.rows());
  for (Eigen::Index m = 0; m < Bt.cols(); ++m)
    for (Eigen::Index l = 0; l < At.cols(); ++l)
      dist(l, m) = scale * (At.col(l) - Bt.col(m)).norm();
  return dist;
}

Eigen::MatrixXd scaled_row_distances_self(const Eigen::MatrixXd& A, double scale) {
  const Eigen::MatrixXd At = A.transpose();
  Eigen::MatrixXd dist(A.rows(), A.rows());
  for (Eigen::Index m = 0; m < At.cols(); ++m) {
    dist(m, m) = 0.0;
    for (Eigen::Index l = 0; l < m; ++l) {
      const double d = scale * (At.col(l) - At.col(m)).norm();
      dist(l, m) = d;
      dist(m, l) = d;
    }
  }
  return dist;
}

Eigen::MatrixXd metric_embedding_rows(const Eigen::MatrixXd& rows, double alpha) {
  require_alpha_compatible(rows, alpha);
  const Eigen::Index D = rows.cols();
  Eigen::MatrixXd out(rows.rows(), D);
  if (alpha == 0.0) {
    for (Eigen::Index i = 0; i < rows.rows(); ++i)
      out.row(i) = clr_row(rows.row(i).transpose()).transpose();
  } else {
    const double scale = static_cast<double>(D) / std::abs(alpha);
    for (Eigen::Index i = 0; i < rows.rows(); ++i)
      out.row(i) = scale * u_alpha_row(rows.row(i).transpose(), alpha).transpose();
  }
  return out;
}

}  // namespace detail

Eigen::MatrixXd helmert_submatrix(Eigen::Index D) {
  if (D < 2) throw input_error("helmert_submatrix: D must be at least 2");
  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(D - 1, D);
  for (Eigen::Index i = 1; i < D; ++i) {
    const double norm = 1.0 / std::sqrt(static_cast<double>(i) * (i + 1));
    for (Eigen::Index j = 0; j < i; ++j) H(i - 1, j) = norm;
    H(i - 1, i) = -static_cast<double>(i) * norm;
  }
  return H;
}

Composition power_transform(const Composition& x, const AlphaParam& alpha) {
  const double a = alpha.value();
  if (a <= 0.0 && (x.values().array() <= 0.0).any())
    throw input_error("alpha must be positive with zeros in the data");
  return close(u_alpha_row(x.values(), a));
}

TransformedVector w_alpha(const Composition& x, const AlphaParam& alpha) {
  const double a = alpha.value();
  if (a <= 0.0 && (x.values().array() <= 0.0).any())
    throw input_error("alpha must be positive with zeros in the data");
  if (alpha.is_zero())
    return {clr_row(x.values()), TransformedSpace::zero_sum_D};
  const double D = static_cast<double>(x.size());
  Eigen::VectorXd w = (D * u_alpha_row(x.values(), a).array() - 1.0) / a;
  return {std::move(w), TransformedSpace::zero_sum_D};
}

TransformedVector alpha_transform(const Composition& x, const AlphaParam& alpha) {
  const Eigen::MatrixXd H = helmert_submatrix(x.size());
  return {H * w_alpha(x, alpha).values, TransformedSpace::euclidean_Dminus1};
}

double alpha_metric(const Composition& x, const Composition& y, const AlphaParam& alpha) {
  if (x.size() != y.size()) throw input_error("alpha_metric: dimension mismatch");
  const double a = alpha.value();
  if (a <= 0.0 &&
      ((x.values().array() <= 0.0).any() || (y.values().array() <= 0.0).any()))
    throw input_error("alpha must be positive with zeros in the data");
  if (alpha.is_zero())
    return (clr_row(x.values()) - clr_row(y.values())).norm();
  const double D = static_cast<double>(x.size());
  return (D / std::abs(a)) *
         (u_alpha_row(x.values(), a) - u_alpha_row(y.values(), a)).norm();
}

Eigen::MatrixXd pairwise_distance_matrix(const CompositionalDataset& X,
                                         const CompositionalDataset& Y,
                                         const AlphaParam& alpha) {
  if (X.dimension() != Y.dimension())
    throw input_error("pairwise_distance_matrix: dimension mismatch");
  const Eigen::MatrixXd ex = detail::metric_embedding_rows(X.matrix(), alpha.value());
  const Eigen::MatrixXd ey = detail::metric_embedding_rows(Y.matrix(), alpha.value());
  return detail::scaled_row_distances(ex, ey, 1.0);
}

Eigen::MatrixXd standardize_columns(const Eigen::MatrixXd& pooled) {
  const Eigen::Index n = pooled.rows();
  if (n < 2) throw input_error("standardize_columns: need at least two rows");
  Eigen::MatrixXd out(n, pooled.cols());
  for (Eigen::Index j = 0; j < pooled.cols(); ++j) {
    const double mean = pooled.col(j).mean();
    const Eigen::VectorXd centered = pooled.col(j).array() - mean;
    const double sd = std::sqrt(centered.squaredNorm() / static_cast<double>(n - 1));
    if (sd == 0.0) throw numeric_error("zero variance column");
    out.col(j) = centered / sd;
  }
  return out;
}

Eigen::MatrixXd power_transform_rows(const Eigen::MatrixXd& rows, double alpha) {
  detail::require_alpha_compatible(rows, alpha);
  Eigen::MatrixXd out(rows.rows(), rows.cols());
  for (Eigen::Index i = 0; i < rows.rows(); ++i)
    out.row(i) = u_alpha_row(rows.row(i).transpose(), alpha).transpose();
  return out;
}

Eigen::MatrixXd w_alpha_rows(const CompositionalDataset& X, const AlphaParam& alpha) {
  const double a = alpha.value();
  detail::require_alpha_compatible(X.matrix(), a);
  const double D = static_cast<double>(X.dimension());
  Eigen::MatrixXd out(X.n(), X.dimension());
  for (Eigen::Index i = 0; i < X.n(); ++i) {
    const Eigen::VectorXd row = X.matrix().row(i).transpose();
    if (alpha.is_zero())
      out.row(i) = clr_row(row).transpose();
    else
      out.row(i) = ((D * u_alpha_row(row, a).array() - 1.0) / a).transpose();
  }
  return out;
}

Eigen::MatrixXd alpha_transform_rows(const CompositionalDataset& X, const AlphaParam& alpha) {
  const Eigen::MatrixXd H = helmert_submatrix(X.dimension());
  return w_alpha_rows(X, alpha) * H.transpose();
}

}  // namespace aebt
