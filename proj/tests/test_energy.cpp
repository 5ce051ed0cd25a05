#include <doctest.h>

#include <cmath>
#include <vector>

#include "aebt/energy.hpp"
#include "aebt/errors.hpp"
#include "aebt/rng.hpp"
#include "aebt/transforms.hpp"

using namespace aebt;

namespace {

CompositionalDataset random_dataset(int n, int D, RngStream& rng, double floor = 0.02) {
  Eigen::MatrixXd raw(n, D);
  for (Eigen::Index i = 0; i < raw.size(); ++i) raw.data()[i] = floor + rng.uniform01();
  return CompositionalDataset::close_rows(raw);
}

// Literal double-loop evaluation of the e-distance from raw Euclidean rows;
// independent of the library's block-sum path.
double naive_energy(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  const double n1 = static_cast<double>(a.rows());
  const double n2 = static_cast<double>(b.rows());
  double between = 0, within_a = 0, within_b = 0;
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < b.rows(); ++j) between += (a.row(i) - b.row(j)).norm();
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.rows(); ++j) within_a += (a.row(i) - a.row(j)).norm();
  for (Eigen::Index i = 0; i < b.rows(); ++i)
    for (Eigen::Index j = 0; j < b.rows(); ++j) within_b += (b.row(i) - b.row(j)).norm();
  return n1 * n2 / (n1 + n2) *
         (2.0 / (n1 * n2) * between - within_a / (n1 * n1) - within_b / (n2 * n2));
}

// Literal triple-sum of the alpha-EBT statistic, computed from scratch with
// std::pow-based power transforms. This is the oracle route: it shares no
// code with alpha_energy_statistic.
double naive_alpha_statistic(const CompositionalDataset& X, const CompositionalDataset& Y,
                             double alpha) {
  const auto u_row = [&](const Eigen::MatrixXd& m, Eigen::Index r) {
    Eigen::VectorXd u(m.cols());
    double sum = 0;
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      u[j] = std::pow(m(r, j), alpha);
      sum += u[j];
    }
    return (u / sum).eval();
  };
  const auto dist = [&](const CompositionalDataset& A, Eigen::Index i,
                        const CompositionalDataset& B, Eigen::Index j) {
    double ss = 0;
    const Eigen::VectorXd ui = u_row(A.matrix(), i);
    const Eigen::VectorXd uj = u_row(B.matrix(), j);
    for (Eigen::Index c = 0; c < ui.size(); ++c) ss += (ui[c] - uj[c]) * (ui[c] - uj[c]);
    return static_cast<double>(ui.size()) / std::abs(alpha) * std::sqrt(ss);
  };
  const double n1 = static_cast<double>(X.n());
  const double n2 = static_cast<double>(Y.n());
  double between = 0, within_x = 0, within_y = 0;
  for (Eigen::Index l = 0; l < X.n(); ++l)
    for (Eigen::Index m = 0; m < Y.n(); ++m) between += dist(X, l, Y, m);
  for (Eigen::Index l = 0; l < X.n(); ++l)
    for (Eigen::Index m = 0; m < X.n(); ++m) within_x += dist(X, l, X, m);
  for (Eigen::Index l = 0; l < Y.n(); ++l)
    for (Eigen::Index m = 0; m < Y.n(); ++m) within_y += dist(Y, l, Y, m);
  return n1 * n2 / (n1 + n2) *
         (2.0 / (n1 * n2) * between - within_x / (n1 * n1) - within_y / (n2 * n2));
}

}  // namespace

TEST_CASE("e_distance on singleton samples is the plain distance") {
  Eigen::MatrixXd between(1, 1), zero(1, 1);
  between << 2.5;
  zero << 0.0;
  CHECK(e_distance(between, zero, zero) == doctest::Approx(2.5).epsilon(1e-15));
}

TEST_CASE("e_distance vanishes for identical samples") {
  RngStream rng(5);
  Eigen::MatrixXd pts(4, 3);
  for (Eigen::Index i = 0; i < pts.size(); ++i) pts.data()[i] = rng.normal();
  Eigen::MatrixXd within(4, 4), between(4, 4);
  for (Eigen::Index i = 0; i < 4; ++i)
    for (Eigen::Index j = 0; j < 4; ++j) {
      within(i, j) = (pts.row(i) - pts.row(j)).norm();
      between(i, j) = within(i, j);
    }
  CHECK(std::abs(e_distance(between, within, within)) <= 1e-12);
}

TEST_CASE("e_distance input checks") {
  CHECK_THROWS_AS(e_distance(Eigen::MatrixXd(0, 2), Eigen::MatrixXd(0, 0),
                             Eigen::MatrixXd(2, 2)),
                  input_error);
  CHECK_THROWS_AS(e_distance(Eigen::MatrixXd::Zero(2, 2), Eigen::MatrixXd::Zero(3, 3),
                             Eigen::MatrixXd::Zero(2, 2)),
                  input_error);
}

TEST_CASE("energy statistic matches the naive evaluation") {
  RngStream rng(13);
  for (int trial = 0; trial < 20; ++trial) {
    Eigen::MatrixXd a(3, 2), b(3, 2);
    for (Eigen::Index i = 0; i < a.size(); ++i) a.data()[i] = rng.normal();
    for (Eigen::Index i = 0; i < b.size(); ++i) b.data()[i] = rng.normal();
    CHECK(energy_statistic_euclidean(a, b) ==
          doctest::Approx(naive_energy(a, b)).epsilon(1e-12));
  }
}

TEST_CASE("energy statistic basics") {
  Eigen::MatrixXd x(3, 2);
  x << 1, 2, 3, 4, 5, 6;
  CHECK(std::abs(energy_statistic_euclidean(x, x)) <= 1e-12);

  Eigen::MatrixXd a(1, 1), b(1, 1);
  a << 0.0;
  b << 1.0;
  CHECK(energy_statistic_euclidean(a, b) == doctest::Approx(1.0).epsilon(1e-15));

  CHECK_THROWS_AS(energy_statistic_euclidean(Eigen::MatrixXd::Zero(2, 2),
                                             Eigen::MatrixXd::Zero(2, 3)),
                  input_error);
}

TEST_CASE("energy statistic grows with the shift") {
  RngStream rng(17);
  Eigen::MatrixXd x(10, 3);
  for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] = rng.normal();
  double previous = energy_statistic_euclidean(x, x);
  for (double shift : {0.5, 1.0, 2.0}) {
    const Eigen::MatrixXd shifted = x.array() + shift;
    const double stat = energy_statistic_euclidean(x, shifted);
    CHECK(stat > previous);
    previous = stat;
  }
}

TEST_CASE("alpha energy statistic: zero for equal samples, isometry route") {
  RngStream rng(29);
  const CompositionalDataset X = random_dataset(6, 4, rng);
  CHECK(std::abs(alpha_energy_statistic(X, X, AlphaParam(0.5))) <= 1e-12);

  for (int trial = 0; trial < 25; ++trial) {
    const CompositionalDataset A = random_dataset(5, 4, rng);
    const CompositionalDataset B = random_dataset(7, 4, rng);
    const double a = trial % 5 == 0 ? 0.0 : -1.0 + 2.0 * rng.uniform01();
    const AlphaParam alpha(a);
    const double via_metric = alpha_energy_statistic(A, B, alpha);
    const double via_transform = energy_statistic_euclidean(alpha_transform_rows(A, alpha),
                                                            alpha_transform_rows(B, alpha));
    CHECK(via_metric == doctest::Approx(via_transform).epsilon(1e-10));
    // Exchange symmetry is exact by construction.
    CHECK(via_metric == alpha_energy_statistic(B, A, alpha));
    // Two-sample energy statistics are non-negative up to rounding.
    CHECK(via_metric >= -1e-10);
  }
}

TEST_CASE("alpha energy statistic matches the literal triple sum") {
  RngStream rng(43);
  for (int trial = 0; trial < 20; ++trial) {
    const CompositionalDataset X = random_dataset(4, 3, rng);
    const CompositionalDataset Y = random_dataset(4, 3, rng);
    const double stat = alpha_energy_statistic(X, Y, AlphaParam(0.5));
    const double oracle = naive_alpha_statistic(X, Y, 0.5);
    CHECK(stat == doctest::Approx(oracle).epsilon(1e-10));
  }
}

TEST_CASE("alpha energy statistic is invariant to row order, bit-exact") {
  RngStream rng(47);
  const CompositionalDataset X = random_dataset(6, 4, rng);
  const CompositionalDataset Y = random_dataset(5, 4, rng);
  // Reverse the rows of X, preserving them bitwise.
  const CompositionalDataset Xr =
      CompositionalDataset::from_matrix(X.matrix().colwise().reverse());
  const AlphaParam alpha(0.7);
  CHECK(alpha_energy_statistic(X, Y, alpha) == alpha_energy_statistic(Xr, Y, alpha));
}

TEST_CASE("standardized variant equals euclidean statistic on standardized rows") {
  RngStream rng(53);
  const CompositionalDataset X = random_dataset(6, 4, rng);
  const CompositionalDataset Y = random_dataset(8, 4, rng);
  const AlphaParam alpha(0.5);
  Eigen::MatrixXd pooled(X.n() + Y.n(), 4);
  pooled.topRows(X.n()) = X.matrix();
  pooled.bottomRows(Y.n()) = Y.matrix();
  const Eigen::MatrixXd z = standardize_columns(
      alpha_transform_rows(CompositionalDataset::from_matrix(pooled), alpha));
  const double expected = energy_statistic_euclidean(z.topRows(X.n()), z.bottomRows(Y.n()));
  CHECK(alpha_energy_statistic(X, Y, alpha, true) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("k-sample statistic") {
  RngStream rng(59);
  const CompositionalDataset A = random_dataset(4, 3, rng);
  const CompositionalDataset B = random_dataset(5, 3, rng);
  const CompositionalDataset C = random_dataset(6, 3, rng);
  const AlphaParam alpha(1.0);

  CHECK(k_sample_statistic({A, B}, alpha) == alpha_energy_statistic(A, B, alpha));
  CHECK(std::abs(k_sample_statistic({A, A, A}, alpha)) <= 1e-12);
  const double pairwise = alpha_energy_statistic(A, B, alpha) +
                          alpha_energy_statistic(A, C, alpha) +
                          alpha_energy_statistic(B, C, alpha);
  CHECK(k_sample_statistic({A, B, C}, alpha) == doctest::Approx(pairwise).epsilon(1e-14));
  CHECK_THROWS_AS(k_sample_statistic({A}, alpha), input_error);
}

TEST_CASE("permutation test on degenerate data gives p = 1") {
  Eigen::MatrixXd rows(3, 3);
  rows << 0.2, 0.3, 0.5, 0.2, 0.3, 0.5, 0.2, 0.3, 0.5;
  const auto X = CompositionalDataset::close_rows(rows);
  const TestResult r = permutation_test({X, X}, {AlphaParam(1.0)}, 99, 12345);
  CHECK(r.statistics[0] == 0.0);
  CHECK(r.p_values[0] == 1.0);
}

TEST_CASE("permutation test on two copies of one dataset gives p = 1") {
  RngStream rng(73);
  const CompositionalDataset X = random_dataset(5, 3, rng);
  const TestResult r = permutation_test({X, X}, {AlphaParam(1.0)}, 999, 5);
  // The observed statistic cancels to rounding noise; every permuted
  // statistic is mathematically >= it, so ties must drive p to 1.
  CHECK(std::abs(r.statistics[0]) <= 1e-12);
  CHECK(r.p_values[0] == 1.0);
}

TEST_CASE("permutation p-values live on the add-one lattice") {
  RngStream rng(61);
  const CompositionalDataset X = random_dataset(8, 3, rng);
  const CompositionalDataset Y = random_dataset(8, 3, rng);
  const TestResult r = permutation_test({X, Y}, {AlphaParam(1.0), AlphaParam(0.1)}, 999, 7);
  REQUIRE(r.p_values.size() == 2);
  for (double p : r.p_values) {
    CHECK(p > 0.0);
    CHECK(p <= 1.0);
    const double scaled = p * 1000.0;
    CHECK(std::abs(scaled - std::round(scaled)) <= 1e-9);
  }
  CHECK(r.replications == 999);
  CHECK(r.method == TestMethod::alpha_ebt);
}

TEST_CASE("permutation test is deterministic in the seed") {
  RngStream rng(67);
  const CompositionalDataset X = random_dataset(10, 4, rng);
  const CompositionalDataset Y = random_dataset(12, 4, rng);
  const std::vector<AlphaParam> alphas{AlphaParam(0.1), AlphaParam(1.0)};
  const TestResult a = permutation_test({X, Y}, alphas, 199, 99);
  const TestResult b = permutation_test({X, Y}, alphas, 199, 99);
  CHECK(a.statistics == b.statistics);
  CHECK(a.p_values == b.p_values);
  const TestResult c = permutation_test({X, Y}, alphas, 199, 100);
  CHECK(c.p_values != a.p_values);  // a different seed shuffles differently
}

TEST_CASE("permutation test rejects zero data with non-positive alpha up front") {
  Eigen::MatrixXd rows(3, 3);
  rows << 0.5, 0.5, 0.0, 0.2, 0.3, 0.5, 0.3, 0.3, 0.4;
  const auto X = CompositionalDataset::from_matrix(rows);
  Eigen::MatrixXd other(3, 3);
  other << 0.2, 0.4, 0.4, 0.1, 0.8, 0.1, 0.3, 0.5, 0.2;
  const auto Y = CompositionalDataset::from_matrix(other);
  CHECK_THROWS_WITH_AS(permutation_test({X, Y}, {AlphaParam(0.0)}, 99, 1),
                       doctest::Contains("alpha must be positive with zeros"), input_error);
  // Positive alpha runs fine on the same data.
  CHECK_NOTHROW(permutation_test({X, Y}, {AlphaParam(0.5)}, 19, 1));
}

TEST_CASE("permutation test handles three samples") {
  RngStream rng(71);
  const CompositionalDataset A = random_dataset(6, 3, rng);
  const CompositionalDataset B = random_dataset(7, 3, rng);
  const CompositionalDataset C = random_dataset(5, 3, rng);
  const TestResult r = permutation_test({A, B, C}, {AlphaParam(1.0)}, 99, 3);
  CHECK(r.p_values[0] > 0.0);
  CHECK(r.p_values[0] <= 1.0);
  CHECK(r.statistics[0] >= -1e-10);
}
