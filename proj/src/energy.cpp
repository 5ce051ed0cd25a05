#include "aebt/energy.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "aebt/errors.hpp"
#include "aebt/rng.hpp"
#include "aebt/transforms.hpp"

namespace aebt {

namespace {

// Sum in ascending order. Distance blocks are sums over multisets; sorting
// makes the result invariant under row reordering and sample exchange.
double sorted_sum(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  return std::accumulate(values.begin(), values.end(), 0.0);
}

double block_sum(const Eigen::MatrixXd& m) {
  std::vector<double> v(m.data(), m.data() + m.size());
  return sorted_sum(std::move(v));
}

double combine_e_distance(double n1, double n2, double sum_between, double sum_within_a,
                          double sum_within_b) {
  const double term_between = 2.0 / (n1 * n2) * sum_between;
  // Parenthesized so the within terms commute exactly under sample exchange.
  return n1 * n2 / (n1 + n2) *
         (term_between - (sum_within_a / (n1 * n1) + sum_within_b / (n2 * n2)));
}

// Euclidean two-sample statistic from raw rows.
double euclidean_statistic(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  const double n1 = static_cast<double>(a.rows());
  const double n2 = static_cast<double>(b.rows());
  const double s_ab = block_sum(detail::scaled_row_distances(a, b, 1.0));
  const double s_aa = block_sum(detail::scaled_row_distances_self(a, 1.0));
  const double s_bb = block_sum(detail::scaled_row_distances_self(b, 1.0));
  return combine_e_distance(n1, n2, s_ab, s_aa, s_bb);
}

void check_groups(const std::vector<CompositionalDataset>& groups) {
  if (groups.size() < 2) throw input_error("need at least two samples");
  const Eigen::Index D = groups.front().dimension();
  for (const auto& g : groups) {
    if (g.dimension() != D) throw input_error("samples must share the same dimension");
    if (g.n() < 2) throw input_error("each sample needs at least two observations");
  }
}

Eigen::MatrixXd pool_rows(const std::vector<CompositionalDataset>& groups) {
  Eigen::Index total = 0;
  for (const auto& g : groups) total += g.n();
  Eigen::MatrixXd pooled(total, groups.front().dimension());
  Eigen::Index at = 0;
  for (const auto& g : groups) {
    pooled.middleRows(at, g.n()) = g.matrix();
    at += g.n();
  }
  return pooled;
}

// Pooled distance matrix for one alpha, honoring the standardization variant.
Eigen::MatrixXd pooled_distances(const Eigen::MatrixXd& pooled_rows, const AlphaParam& alpha,
                                 bool standardize) {
  if (standardize) {
    const auto ds = CompositionalDataset::from_matrix(pooled_rows);
    const Eigen::MatrixXd z = standardize_columns(alpha_transform_rows(ds, alpha));
    return detail::scaled_row_distances_self(z, 1.0);
  }
  return detail::scaled_row_distances_self(
      detail::metric_embedding_rows(pooled_rows, alpha.value()), 1.0);
}

// Sum of pairwise e-distances from one pooled matrix under a labeling.
// acc(g, h) accumulates distances of pairs (i < j) labeled (g, h).
double statistic_from_pooled(const Eigen::MatrixXd& dist, const std::vector<int>& label,
                             const std::vector<Eigen::Index>& sizes) {
  const int k = static_cast<int>(sizes.size());
  Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(k, k);
  const Eigen::Index n = dist.rows();
  for (Eigen::Index j = 1; j < n; ++j) {
    const int lj = label[j];
    for (Eigen::Index i = 0; i < j; ++i) acc(label[i], lj) += dist(i, j);
  }
  double total = 0.0;
  for (int g = 0; g < k; ++g) {
    for (int h = g + 1; h < k; ++h) {
      const double ng = static_cast<double>(sizes[g]);
      const double nh = static_cast<double>(sizes[h]);
      total += combine_e_distance(ng, nh, acc(g, h) + acc(h, g), 2.0 * acc(g, g),
                                  2.0 * acc(h, h));
    }
  }
  return total;
}

}  // namespace

std::string to_string(TestMethod method) {
  switch (method) {
    case TestMethod::alpha_ebt: return "alpha_ebt";
    case TestMethod::euclidean_ebt: return "euclidean_ebt";
    case TestMethod::rpbt: return "rpbt";
  }
  return "unknown";
}

double e_distance(const Eigen::MatrixXd& between, const Eigen::MatrixXd& within_a,
                  const Eigen::MatrixXd& within_b) {
  const Eigen::Index n1 = between.rows();
  const Eigen::Index n2 = between.cols();
  if (n1 < 1 || n2 < 1) throw input_error("e_distance: empty sample");
  if (within_a.rows() != n1 || within_a.cols() != n1 || within_b.rows() != n2 ||
      within_b.cols() != n2)
    throw input_error("e_distance: inconsistent block dimensions");
  return combine_e_distance(static_cast<double>(n1), static_cast<double>(n2),
                            block_sum(between), block_sum(within_a), block_sum(within_b));
}

double energy_statistic_euclidean(const Eigen::MatrixXd& sample_a,
                                  const Eigen::MatrixXd& sample_b) {
  if (sample_a.cols() != sample_b.cols())
    throw input_error("energy statistic: dimension mismatch");
  if (sample_a.rows() < 1 || sample_b.rows() < 1)
    throw input_error("energy statistic: empty sample");
  return euclidean_statistic(sample_a, sample_b);
}

double alpha_energy_statistic(const CompositionalDataset& X, const CompositionalDataset& Y,
                              const AlphaParam& alpha, bool standardize) {
  if (X.dimension() != Y.dimension())
    throw input_error("alpha_energy_statistic: dimension mismatch");
  const double n1 = static_cast<double>(X.n());
  const double n2 = static_cast<double>(Y.n());
  if (standardize) {
    Eigen::MatrixXd pooled(X.n() + Y.n(), X.dimension());
    pooled.topRows(X.n()) = X.matrix();
    pooled.bottomRows(Y.n()) = Y.matrix();
    const auto ds = CompositionalDataset::from_matrix(std::move(pooled));
    detail::require_alpha_compatible(ds.matrix(), alpha.value());
    const Eigen::MatrixXd z = standardize_columns(alpha_transform_rows(ds, alpha));
    return euclidean_statistic(z.topRows(X.n()), z.bottomRows(Y.n()));
  }
  const Eigen::MatrixXd ex = detail::metric_embedding_rows(X.matrix(), alpha.value());
  const Eigen::MatrixXd ey = detail::metric_embedding_rows(Y.matrix(), alpha.value());
  const double s_xy = block_sum(detail::scaled_row_distances(ex, ey, 1.0));
  const double s_xx = block_sum(detail::scaled_row_distances_self(ex, 1.0));
  const double s_yy = block_sum(detail::scaled_row_distances_self(ey, 1.0));
  return combine_e_distance(n1, n2, s_xy, s_xx, s_yy);
}

double k_sample_statistic(const std::vector<CompositionalDataset>& groups,
                          const AlphaParam& alpha, bool standardize) {
  check_groups(groups);
  double total = 0.0;
  for (std::size_t g = 0; g < groups.size(); ++g)
    for (std::size_t h = g + 1; h < groups.size(); ++h)
      total += alpha_energy_statistic(groups[g], groups[h], alpha, standardize);
  return total;
}

TestResult permutation_test(const std::vector<CompositionalDataset>& groups,
                            const std::vector<AlphaParam>& alphas, int permutations,
                            std::uint64_t seed, bool standardize) {
  check_groups(groups);
  if (alphas.empty()) throw input_error("permutation_test: need at least one alpha");
  if (permutations < 1) throw input_error("permutation_test: R must be at least 1");

  const Eigen::MatrixXd pooled = pool_rows(groups);
  // Alpha restrictions surface before any permutation work.
  for (const auto& a : alphas) detail::require_alpha_compatible(pooled, a.value());

  std::vector<Eigen::Index> sizes;
  std::vector<int> base_label;
  for (std::size_t g = 0; g < groups.size(); ++g) {
    sizes.push_back(groups[g].n());
    base_label.insert(base_label.end(), groups[g].n(), static_cast<int>(g));
  }
  const Eigen::Index n = pooled.rows();

  TestResult result;
  result.method = TestMethod::alpha_ebt;
  result.replications = permutations;
  result.seed = seed;
  result.standardized = standardize;

  for (const auto& alpha : alphas) {
    const Eigen::MatrixXd dist = pooled_distances(pooled, alpha, standardize);
    const double t_obs = statistic_from_pooled(dist, base_label, sizes);

    // Mathematically equal statistics differ by summation-order rounding,
    // e.g. on duplicate-structured data; such near-ties must count toward
    // the tail (ties are counted as >=, the conservative direction).
    const double tie_tolerance = 1e-9 * (1.0 + std::abs(t_obs));
    int at_least = 0;
    std::vector<int> label(n);
    for (int r = 1; r <= permutations; ++r) {
      // The shuffle for replicate r depends only on (seed, r), so it is
      // shared across alphas and across any evaluation schedule.
      RngStream stream(seed, static_cast<std::uint64_t>(r));
      label = base_label;
      for (Eigen::Index i = n - 1; i > 0; --i) {
        const Eigen::Index j =
            static_cast<Eigen::Index>(stream.uniform_below(static_cast<std::uint64_t>(i + 1)));
        std::swap(label[i], label[j]);
      }
      if (statistic_from_pooled(dist, label, sizes) >= t_obs - tie_tolerance) ++at_least;
    }
    result.alphas.push_back(alpha.value());
    result.statistics.push_back(t_obs);
    result.p_values.push_back(static_cast<double>(1 + at_least) /
                              static_cast<double>(permutations + 1));
  }
  return result;
}

}  // namespace aebt
