#pragma once

#include <Eigen/Dense>

#include "aebt/simplex.hpp"

namespace aebt {

enum class TransformedSpace {
  zero_sum_D,           // D entries summing to zero
  euclidean_Dminus1,    // unconstrained (D-1)-vector
};

struct TransformedVector {
  Eigen::VectorXd values;
  TransformedSpace space;
};

// The (D-1) x D Helmert sub-matrix: row i (1-based) carries 1/sqrt(i(i+1))
// in columns 1..i and -i/sqrt(i(i+1)) in column i+1. Rows are orthonormal
// and orthogonal to the all-ones vector.
Eigen::MatrixXd helmert_submatrix(Eigen::Index D);

// Power transformation: x_i^alpha / sum_j x_j^alpha. Identity at alpha = 1;
// the uniform composition at alpha = 0 (positive data only). Powers are
// computed as exp(alpha log x) for x > 0 and exactly 0 for x = 0, alpha > 0.
Composition power_transform(const Composition& x, const AlphaParam& alpha);

// (D u_alpha(x) - 1) / alpha, a zero-sum D-vector; the centred log-ratio
// log(x_i / g(x)) in the alpha = 0 limit.
TransformedVector w_alpha(const Composition& x, const AlphaParam& alpha);

// Helmert image of w_alpha: the working (D-1)-dimensional coordinates.
// Norm-preserving, since the Helmert rows span the zero-sum subspace.
TransformedVector alpha_transform(const Composition& x, const AlphaParam& alpha);

// The alpha-metric: (D/|alpha|) ||u_alpha(x) - u_alpha(y)|| for alpha != 0,
// the Aitchison distance at alpha = 0. Always equals
// ||w_alpha(x) - w_alpha(y)||.
double alpha_metric(const Composition& x, const Composition& y, const AlphaParam& alpha);

// Entry (l, m) is alpha_metric(X_l, Y_m). Symmetric with zero diagonal
// when X and Y hold identical rows.
Eigen::MatrixXd pairwise_distance_matrix(const CompositionalDataset& X,
                                         const CompositionalDataset& Y,
                                         const AlphaParam& alpha);

// Centres and scales every column of the pooled matrix to sample mean 0 and
// sample (n-1) standard deviation 1. Throws numeric_error on a constant
// column.
Eigen::MatrixXd standardize_columns(const Eigen::MatrixXd& pooled);

// Bulk row-wise forms used by the tests and the harness.
Eigen::MatrixXd power_transform_rows(const Eigen::MatrixXd& rows, double alpha);
Eigen::MatrixXd w_alpha_rows(const CompositionalDataset& X, const AlphaParam& alpha);
Eigen::MatrixXd alpha_transform_rows(const CompositionalDataset& X, const AlphaParam& alpha);

namespace detail {

// Throws input_error when alpha <= 0 meets zero entries.
void require_alpha_compatible(const Eigen::MatrixXd& rows, double alpha);

// All pairwise Euclidean row distances between A and B, times scale.
Eigen::MatrixXd scaled_row_distances(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                                     double scale);
// Self-distance variant exploiting symmetry; exact zero diagonal.
Eigen::MatrixXd scaled_row_distances_self(const Eigen::MatrixXd& A, double scale);

// Pooled rows -> the matrix whose pairwise Euclidean row distances are the
// alpha-metric distances (u_alpha rows scaled by D/|alpha|, or CLR rows).
Eigen::MatrixXd metric_embedding_rows(const Eigen::MatrixXd& rows, double alpha);

}  // namespace detail

}  // namespace aebt
