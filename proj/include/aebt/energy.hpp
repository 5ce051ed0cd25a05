#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <string>
#include <vector>

#include "aebt/simplex.hpp"

namespace aebt {

enum class TestMethod { alpha_ebt, euclidean_ebt, rpbt };

std::string to_string(TestMethod method);

// Outcome of one test invocation. For the energy tests, statistics and
// p_values run parallel to alphas; for the RPBT, the single statistic is the
// largest KS statistic over the projections and alphas stays empty.
struct TestResult {
  TestMethod method = TestMethod::alpha_ebt;
  std::vector<double> alphas;
  std::vector<double> statistics;
  std::vector<double> p_values;  // each in (0, 1]
  int replications = 0;          // permutations R, or projections B
  std::uint64_t seed = 0;
  bool standardized = false;
};

// The e-distance between two finite samples given their distance blocks:
//   n1 n2/(n1+n2) [ 2/(n1 n2) sum(between) - sum(within_a)/n1^2 - sum(within_b)/n2^2 ].
// Within-blocks must be symmetric with zero diagonals.
double e_distance(const Eigen::MatrixXd& between, const Eigen::MatrixXd& within_a,
                  const Eigen::MatrixXd& within_b);

// Two-sample energy statistic on Euclidean rows.
double energy_statistic_euclidean(const Eigen::MatrixXd& sample_a,
                                  const Eigen::MatrixXd& sample_b);

// Two-sample energy statistic with alpha-metric distances. With standardize,
// the pooled alpha-transformed rows are column-standardized first and plain
// Euclidean distances are used on the standardized rows.
double alpha_energy_statistic(const CompositionalDataset& X, const CompositionalDataset& Y,
                              const AlphaParam& alpha, bool standardize = false);

// k >= 2 samples: sum of the two-sample statistic over all unordered pairs.
double k_sample_statistic(const std::vector<CompositionalDataset>& groups,
                          const AlphaParam& alpha, bool standardize = false);

// Permutation test for equality of distributions of two or more samples, one
// statistic and p-value per requested alpha. The pooled distance matrix is
// computed once per alpha; each of the R label shuffles derives from a
// counter-indexed substream of the seed, so the result does not depend on
// evaluation order. p = (1 + #{T_perm >= T_obs}) / (R + 1).
TestResult permutation_test(const std::vector<CompositionalDataset>& groups,
                            const std::vector<AlphaParam>& alphas, int permutations,
                            std::uint64_t seed, bool standardize = false);

}  // namespace aebt
