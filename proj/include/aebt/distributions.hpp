#pragma once

#include <Eigen/Dense>

#include "aebt/rng.hpp"
#include "aebt/simplex.hpp"

namespace aebt {

struct DirichletParams {
  Eigen::VectorXd a;  // concentration, all entries > 0

  explicit DirichletParams(Eigen::VectorXd concentration);
  double a0() const { return a.sum(); }
};

// Multivariate normal in R^{D-1} pushed onto the simplex through the
// ALR inverse.
struct SimplicialNormalParams {
  Eigen::VectorXd mu;     // D-1
  Eigen::MatrixXd sigma;  // (D-1) x (D-1), symmetric positive definite

  SimplicialNormalParams(Eigen::VectorXd mu, Eigen::MatrixXd sigma);
};

// n rows of normalized Gamma(a_i, 1) draws.
CompositionalDataset sample_dirichlet(const DirichletParams& params, int n, RngStream& rng);

// Maps u in R^{D-1} onto the simplex:
//   x = (1, e^{u_1}, ..., e^{u_{D-1}}) / (1 + sum_j e^{u_j}),
// computed with a max shift so large entries cannot overflow.
Composition alr_inverse(const Eigen::VectorXd& u);

// Plain MVN draws (the pre-mapping coordinates), via Cholesky.
Eigen::MatrixXd sample_mvn(const SimplicialNormalParams& params, int n, RngStream& rng);

// MVN draws pushed through alr_inverse, one composition per row.
CompositionalDataset sample_simplicial_normal(const SimplicialNormalParams& params, int n,
                                              RngStream& rng);

// Random SPD matrix: Sigma = Q diag(lambda) Q^T with Q from the QR
// decomposition of a d x d standard Gaussian matrix and lambda_i drawn from
// an exponential with the given mean. The basis is drawn before the
// eigenvalues; pass eigenvalues_out to recover the drawn spectrum.
Eigen::MatrixXd generate_covariance(Eigen::Index d, RngStream& rng, double eigen_mean = 0.4,
                                    Eigen::VectorXd* eigenvalues_out = nullptr);

// KL[Dir(a) || Dir(b)] in closed form (digamma/log-gamma).
double kl_dirichlet(const DirichletParams& a, const DirichletParams& b);

// KL[N(mu1, sigma1) || N(mu2, sigma2)] via Cholesky solves and
// log-determinants; no explicit inverses.
double kl_mvn(const Eigen::VectorXd& mu1, const Eigen::MatrixXd& sigma1,
              const Eigen::VectorXd& mu2, const Eigen::MatrixXd& sigma2);

}  // namespace aebt
