#include "aebt/rpbt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "aebt/errors.hpp"

namespace aebt {

Eigen::VectorXd sqrt_map(const Composition& x) {
  return x.values().array().sqrt();
}

Eigen::MatrixXd sqrt_map_rows(const CompositionalDataset& X) {
  return X.matrix().array().sqrt();
}

Eigen::VectorXd random_direction(Eigen::Index D, RngStream& rng) {
  if (D < 2) throw input_error("random_direction: D must be at least 2");
  Eigen::VectorXd v(D);
  double norm2;
  do {
    for (Eigen::Index i = 0; i < D; ++i) v[i] = rng.normal();
    norm2 = v.squaredNorm();
  } while (norm2 == 0.0);
  return v / std::sqrt(norm2);
}

ProjectionBatch ProjectionBatch::draw(Eigen::Index D, int B, std::uint64_t seed) {
  if (B < 1) throw input_error("projections: B must be at least 1");
  ProjectionBatch batch;
  batch.seed = seed;
  batch.directions.resize(B, D);
  for (int b = 0; b < B; ++b) {
    RngStream stream(seed, static_cast<std::uint64_t>(b));
    batch.directions.row(b) = random_direction(D, stream).transpose();
  }
  return batch;
}

double kolmogorov_sf(double t) {
  if (t <= 0.0) return 1.0;
  // Below t = 0.2 the deficit from 1 is under 1e-15 and the alternating
  // series converges too slowly to be worth running.
  if (t < 0.2) return 1.0;
  const double e = -2.0 * t * t;
  double sum = 0.0;
  double sign = 1.0;
  for (int j = 1; j < 10000; ++j) {
    const double term = std::exp(e * static_cast<double>(j) * static_cast<double>(j));
    sum += sign * term;
    if (term < 1e-12) break;
    sign = -sign;
  }
  const double p = 2.0 * sum;
  return std::clamp(p, std::numeric_limits<double>::min(), 1.0);
}

KsTestResult ks_two_sample(std::vector<double> s1, std::vector<double> s2) {
  if (s1.empty() || s2.empty()) throw input_error("ks_two_sample: empty sample");
  std::sort(s1.begin(), s1.end());
  std::sort(s2.begin(), s2.end());
  const double n1 = static_cast<double>(s1.size());
  const double n2 = static_cast<double>(s2.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < s1.size() && j < s2.size()) {
    const double v = std::min(s1[i], s2[j]);
    while (i < s1.size() && s1[i] == v) ++i;
    while (j < s2.size() && s2[j] == v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / n1 - static_cast<double>(j) / n2));
  }
  const double t = std::sqrt(n1 * n2 / (n1 + n2)) * d;
  return {d, kolmogorov_sf(t)};
}

KsTestResult ks_uniform01(std::vector<double> sample) {
  if (sample.empty()) throw input_error("ks_uniform01: empty sample");
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double lo = sample[i] - static_cast<double>(i) / n;
    const double hi = static_cast<double>(i + 1) / n - sample[i];
    d = std::max({d, lo, hi});
  }
  return {d, kolmogorov_sf(std::sqrt(n) * d)};
}

namespace {

void check_pvalues(const std::vector<double>& pvalues) {
  if (pvalues.empty()) throw input_error("combine_pvalues: empty list");
  for (double p : pvalues)
    if (!(p > 0.0 && p <= 1.0)) throw input_error("combine_pvalues: p-values must lie in (0, 1]");
}

}  // namespace

double combine_pvalues_bh(const std::vector<double>& pvalues) {
  check_pvalues(pvalues);
  std::vector<double> sorted(pvalues);
  std::sort(sorted.begin(), sorted.end());
  const double B = static_cast<double>(sorted.size());
  double combined = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < sorted.size(); ++i)
    combined = std::min(combined, B / static_cast<double>(i + 1) * sorted[i]);
  return std::min(combined, 1.0);
}

double combine_pvalues_bonferroni(const std::vector<double>& pvalues) {
  check_pvalues(pvalues);
  const double min_p = *std::min_element(pvalues.begin(), pvalues.end());
  return std::min(static_cast<double>(pvalues.size()) * min_p, 1.0);
}

TestResult rpbt_test(const CompositionalDataset& X, const CompositionalDataset& Y,
                     int projections, std::uint64_t seed, PvalueCombination combination) {
  if (X.dimension() != Y.dimension()) throw input_error("rpbt_test: dimension mismatch");
  if (X.n() < 2 || Y.n() < 2)
    throw input_error("rpbt_test: each sample needs at least two observations");
  const Eigen::MatrixXd m1 = sqrt_map_rows(X);
  const Eigen::MatrixXd m2 = sqrt_map_rows(Y);
  const ProjectionBatch batch = ProjectionBatch::draw(X.dimension(), projections, seed);

  std::vector<double> pvalues(projections);
  double max_ks = 0.0;
  for (int b = 0; b < projections; ++b) {
    const Eigen::VectorXd dir = batch.directions.row(b).transpose();
    const Eigen::VectorXd p1 = m1 * dir;
    const Eigen::VectorXd p2 = m2 * dir;
    const KsTestResult ks = ks_two_sample({p1.data(), p1.data() + p1.size()},
                                          {p2.data(), p2.data() + p2.size()});
    pvalues[b] = ks.p_value;
    max_ks = std::max(max_ks, ks.statistic);
  }

  TestResult result;
  result.method = TestMethod::rpbt;
  result.statistics = {max_ks};
  result.p_values = {combination == PvalueCombination::benjamini_heller
                         ? combine_pvalues_bh(pvalues)
                         : combine_pvalues_bonferroni(pvalues)};
  result.replications = projections;
  result.seed = seed;
  return result;
}

}  // namespace aebt
