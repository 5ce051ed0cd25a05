#include "aebt/distributions.hpp"

#include <Eigen/Cholesky>
#include <Eigen/QR>

#include <cmath>

#include "aebt/errors.hpp"
#include "aebt/special_functions.hpp"

namespace aebt {

namespace {

void check_symmetric(const Eigen::MatrixXd& m, const char* what) {
  if (m.rows() != m.cols()) throw input_error(std::string(what) + ": not square");
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-10)
    throw input_error(std::string(what) + ": not symmetric");
}

Eigen::LLT<Eigen::MatrixXd> cholesky_or_throw(const Eigen::MatrixXd& m, const char* what) {
  Eigen::LLT<Eigen::MatrixXd> llt(m);
  if (llt.info() != Eigen::Success)
    throw numeric_error(std::string(what) + ": not positive definite");
  return llt;
}

double log_det_from_llt(const Eigen::LLT<Eigen::MatrixXd>& llt) {
  return 2.0 * llt.matrixLLT().diagonal().array().log().sum();
}

}  // namespace

DirichletParams::DirichletParams(Eigen::VectorXd concentration) : a(std::move(concentration)) {
  if (a.size() < 2) throw input_error("dirichlet: need at least two components");
  if (!(a.array() > 0.0).all()) throw input_error("dirichlet: concentrations must be positive");
}

SimplicialNormalParams::SimplicialNormalParams(Eigen::VectorXd mu_in, Eigen::MatrixXd sigma_in)
    : mu(std::move(mu_in)), sigma(std::move(sigma_in)) {
  if (sigma.rows() != mu.size()) throw input_error("simplicial normal: mu/sigma size mismatch");
  check_symmetric(sigma, "sigma");
  cholesky_or_throw(sigma, "sigma");
}

CompositionalDataset sample_dirichlet(const DirichletParams& params, int n, RngStream& rng) {
  if (n < 1) throw input_error("sample_dirichlet: n must be at least 1");
  const Eigen::Index D = params.a.size();
  Eigen::MatrixXd raw(n, D);
  for (int i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < D; ++j) raw(i, j) = rng.gamma(params.a[j]);
  return CompositionalDataset::close_rows(raw);
}

Composition alr_inverse(const Eigen::VectorXd& u) {
  if (u.size() < 1) throw input_error("alr_inverse: empty input");
  if (!u.array().isFinite().all()) throw input_error("alr_inverse: non-finite input");
  const double shift = std::max(0.0, u.maxCoeff());
  Eigen::VectorXd x(u.size() + 1);
  x[0] = std::exp(-shift);
  for (Eigen::Index j = 0; j < u.size(); ++j) x[j + 1] = std::exp(u[j] - shift);
  return close(x);
}

Eigen::MatrixXd sample_mvn(const SimplicialNormalParams& params, int n, RngStream& rng) {
  if (n < 1) throw input_error("sample_mvn: n must be at least 1");
  const Eigen::Index d = params.mu.size();
  const Eigen::MatrixXd L = cholesky_or_throw(params.sigma, "sigma").matrixL();
  Eigen::MatrixXd draws(n, d);
  Eigen::VectorXd z(d);
  for (int i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) z[j] = rng.normal();
    draws.row(i) = (params.mu + L * z).transpose();
  }
  return draws;
}

CompositionalDataset sample_simplicial_normal(const SimplicialNormalParams& params, int n,
                                              RngStream& rng) {
  const Eigen::MatrixXd draws = sample_mvn(params, n, rng);
  Eigen::MatrixXd rows(n, params.mu.size() + 1);
  for (int i = 0; i < n; ++i)
    rows.row(i) = alr_inverse(draws.row(i).transpose()).values().transpose();
  return CompositionalDataset::from_matrix(std::move(rows));
}

Eigen::MatrixXd generate_covariance(Eigen::Index d, RngStream& rng, double eigen_mean,
                                    Eigen::VectorXd* eigenvalues_out) {
  if (d < 1) throw input_error("generate_covariance: d must be at least 1");
  if (!(eigen_mean > 0.0)) throw input_error("generate_covariance: eigen_mean must be positive");
  Eigen::MatrixXd g(d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) g(i, j) = rng.normal();
  const Eigen::MatrixXd q = Eigen::HouseholderQR<Eigen::MatrixXd>(g).householderQ();

  Eigen::VectorXd lambda(d);
  for (Eigen::Index i = 0; i < d; ++i) {
    do {
      lambda[i] = rng.exponential(eigen_mean);
    } while (lambda[i] == 0.0);
  }
  if (eigenvalues_out) *eigenvalues_out = lambda;

  Eigen::MatrixXd sigma = q * lambda.asDiagonal() * q.transpose();
  return (sigma + sigma.transpose()) / 2.0;
}

double kl_dirichlet(const DirichletParams& a, const DirichletParams& b) {
  if (a.a.size() != b.a.size()) throw input_error("kl_dirichlet: dimension mismatch");
  const double a0 = a.a0();
  const double b0 = b.a0();
  const double psi_a0 = digamma(a0);
  double kl = log_gamma(a0) - log_gamma(b0);
  for (Eigen::Index i = 0; i < a.a.size(); ++i) {
    kl += (a.a[i] - b.a[i]) * (digamma(a.a[i]) - psi_a0);
    kl += log_gamma(b.a[i]) - log_gamma(a.a[i]);
  }
  return kl;
}

double kl_mvn(const Eigen::VectorXd& mu1, const Eigen::MatrixXd& sigma1,
              const Eigen::VectorXd& mu2, const Eigen::MatrixXd& sigma2) {
  const Eigen::Index d = mu1.size();
  if (mu2.size() != d || sigma1.rows() != d || sigma2.rows() != d)
    throw input_error("kl_mvn: dimension mismatch");
  check_symmetric(sigma1, "sigma1");
  check_symmetric(sigma2, "sigma2");
  const auto llt2 = cholesky_or_throw(sigma2, "sigma2");
  const auto llt1 = cholesky_or_throw(sigma1, "sigma1");

  const double trace_term = llt2.solve(sigma1).trace();
  const Eigen::VectorXd diff = mu2 - mu1;
  const double quad = diff.dot(llt2.solve(diff));
  const double log_det_ratio = log_det_from_llt(llt1) - log_det_from_llt(llt2);
  return 0.5 * (trace_term + quad - log_det_ratio - static_cast<double>(d));
}

}  // namespace aebt
