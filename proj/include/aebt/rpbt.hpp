#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

#include "aebt/energy.hpp"
#include "aebt/rng.hpp"
#include "aebt/simplex.hpp"

namespace aebt {

// Componentwise square root; maps compositions onto the unit sphere since
// sum(sqrt(x_i)^2) = 1.
Eigen::VectorXd sqrt_map(const Composition& x);
Eigen::MatrixXd sqrt_map_rows(const CompositionalDataset& X);

// Uniform direction on the sphere S^{D-1}: normalized standard Gaussian.
Eigen::VectorXd random_direction(Eigen::Index D, RngStream& rng);

// B unit directions, one per projection, each drawn from its own substream.
struct ProjectionBatch {
  Eigen::MatrixXd directions;  // B x D, unit rows
  std::uint64_t seed = 0;

  static ProjectionBatch draw(Eigen::Index D, int B, std::uint64_t seed);
};

struct KsTestResult {
  double statistic;
  double p_value;
};

// Two-sample Kolmogorov-Smirnov test. The statistic is the sup over pooled
// points of the gap between right-continuous empirical CDFs; the p-value
// comes from the asymptotic Kolmogorov distribution.
KsTestResult ks_two_sample(std::vector<double> s1, std::vector<double> s2);

// One-sample KS test against U(0, 1), for checking p-value uniformity.
KsTestResult ks_uniform01(std::vector<double> sample);

// Survival function of the Kolmogorov distribution,
//   Q(t) = 2 sum_{j>=1} (-1)^{j-1} exp(-2 j^2 t^2),
// series truncated once terms drop below 1e-12, result clamped to (0, 1].
double kolmogorov_sf(double t);

// Combined p-value min_i (B/i) p_(i) over the ascending order statistics,
// clamped to at most 1.
double combine_pvalues_bh(const std::vector<double>& pvalues);

// Plain Bonferroni comparison rule: B * min(p), clamped to at most 1.
double combine_pvalues_bonferroni(const std::vector<double>& pvalues);

enum class PvalueCombination { benjamini_heller, bonferroni };

// The random-projections test: sqrt-map both samples, project along B random
// directions, KS-test every projection, combine the B p-values.
TestResult rpbt_test(const CompositionalDataset& X, const CompositionalDataset& Y,
                     int projections, std::uint64_t seed,
                     PvalueCombination combination = PvalueCombination::benjamini_heller);

}  // namespace aebt
