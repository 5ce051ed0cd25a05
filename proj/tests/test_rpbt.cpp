#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "aebt/errors.hpp"
#include "aebt/rpbt.hpp"

using namespace aebt;

namespace {

Eigen::VectorXd vec(std::initializer_list<double> values) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double x : values) v[i++] = x;
  return v;
}

CompositionalDataset random_dataset(int n, int D, RngStream& rng) {
  Eigen::MatrixXd raw(n, D);
  for (Eigen::Index i = 0; i < raw.size(); ++i) raw.data()[i] = 0.01 + rng.uniform01();
  return CompositionalDataset::close_rows(raw);
}

// Dual theta-function form of the Kolmogorov CDF; an independent route to
// the survival function, accurate for moderate t.
double kolmogorov_sf_oracle(double t) {
  double cdf = 0.0;
  for (int j = 1; j <= 50; ++j) {
    const double odd = 2.0 * j - 1.0;
    cdf += std::exp(-odd * odd * std::numbers::pi * std::numbers::pi / (8.0 * t * t));
  }
  cdf *= std::sqrt(2.0 * std::numbers::pi) / t;
  return 1.0 - cdf;
}

}  // namespace

TEST_CASE("sqrt map lands on the unit sphere") {
  const Eigen::VectorXd corner = sqrt_map(close(vec({1, 0, 0})));
  CHECK(corner[0] == 1.0);
  CHECK(corner[1] == 0.0);

  const Eigen::VectorXd m = sqrt_map(close(vec({0.25, 0.25, 0.5})));
  CHECK(m[0] == doctest::Approx(0.5));
  CHECK(m[1] == doctest::Approx(0.5));
  CHECK(m[2] == doctest::Approx(0.707107).epsilon(1e-5));

  RngStream rng(3);
  for (int trial = 0; trial < 30; ++trial) {
    Eigen::VectorXd raw(6);
    for (int i = 0; i < 6; ++i) raw[i] = rng.uniform01();
    raw[0] += 0.01;
    CHECK(sqrt_map(close(raw)).norm() == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("random directions are unit norm and reproducible") {
  RngStream rng(17);
  for (Eigen::Index D : {2, 3, 10, 30})
    CHECK(random_direction(D, rng).norm() == doctest::Approx(1.0).epsilon(1e-12));

  RngStream a(5, 1), b(5, 1);
  CHECK((random_direction(7, a) - random_direction(7, b)).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("random directions average out over the sphere") {
  RngStream rng(23);
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(3);
  const int draws = 10000;
  for (int i = 0; i < draws; ++i) mean += random_direction(3, rng);
  mean /= static_cast<double>(draws);
  CHECK(mean.cwiseAbs().maxCoeff() < 0.05);
}

TEST_CASE("projection batch draws per-projection substreams") {
  const ProjectionBatch batch = ProjectionBatch::draw(4, 25, 99);
  REQUIRE(batch.directions.rows() == 25);
  for (int b = 0; b < 25; ++b)
    CHECK(batch.directions.row(b).norm() == doctest::Approx(1.0).epsilon(1e-12));
  const ProjectionBatch again = ProjectionBatch::draw(4, 25, 99);
  CHECK((batch.directions - again.directions).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("two-sample KS statistic hand traces") {
  const KsTestResult same = ks_two_sample({1, 2, 3}, {1, 2, 3});
  CHECK(same.statistic == 0.0);
  CHECK(same.p_value == 1.0);

  CHECK(ks_two_sample({1, 2}, {3, 4}).statistic == doctest::Approx(1.0));
  CHECK(ks_two_sample({1, 3}, {2, 4}).statistic == doctest::Approx(0.5));

  CHECK_THROWS_AS(ks_two_sample({}, {1.0}), input_error);
}

TEST_CASE("two-sample KS is symmetric and monotone-invariant") {
  RngStream rng(31);
  std::vector<double> s1(40), s2(55);
  for (auto& v : s1) v = rng.normal();
  for (auto& v : s2) v = rng.normal() + 0.4;
  const KsTestResult direct = ks_two_sample(s1, s2);
  const KsTestResult swapped = ks_two_sample(s2, s1);
  CHECK(direct.statistic == swapped.statistic);
  CHECK(direct.p_value == swapped.p_value);

  std::vector<double> t1(s1), t2(s2);
  for (auto& v : t1) v = std::exp(v);  // strictly increasing transform
  for (auto& v : t2) v = std::exp(v);
  const KsTestResult transformed = ks_two_sample(t1, t2);
  CHECK(transformed.statistic == direct.statistic);
}

TEST_CASE("kolmogorov survival function") {
  CHECK(kolmogorov_sf(0.0) == 1.0);
  CHECK(kolmogorov_sf(0.1) == 1.0);
  for (double t : {0.5, 0.8, 1.0, 1.5, 2.0})
    CHECK(kolmogorov_sf(t) == doctest::Approx(kolmogorov_sf_oracle(t)).epsilon(1e-9));
  CHECK(kolmogorov_sf(1.0) > kolmogorov_sf(1.2));
  CHECK(kolmogorov_sf(6.0) > 0.0);  // clamped, never exactly zero
  CHECK(kolmogorov_sf(6.0) <= 1.0);
}

TEST_CASE("one-sample KS against the uniform") {
  RngStream rng(37);
  std::vector<double> u(500);
  for (auto& v : u) v = rng.uniform01();
  CHECK(ks_uniform01(u).p_value > 0.01);

  std::vector<double> biased(500);
  for (auto& v : biased) v = rng.uniform01() * 0.5;
  CHECK(ks_uniform01(biased).p_value < 1e-6);
}

TEST_CASE("Benjamini-Heller combination") {
  CHECK(combine_pvalues_bh({0.37}) == doctest::Approx(0.37).epsilon(1e-15));
  CHECK(combine_pvalues_bh({0.2, 0.2, 0.2, 0.2}) == doctest::Approx(0.2).epsilon(1e-15));
  CHECK(combine_pvalues_bh({0.01, 0.04, 0.5}) == doctest::Approx(0.03).epsilon(1e-12));
  CHECK(combine_pvalues_bh({1.0, 1.0}) == 1.0);

  CHECK_THROWS_AS(combine_pvalues_bh({}), input_error);
  CHECK_THROWS_AS(combine_pvalues_bh({0.5, 0.0}), input_error);
  CHECK_THROWS_AS(combine_pvalues_bh({0.5, 1.2}), input_error);
}

TEST_CASE("Benjamini-Heller combination is monotone and bounded") {
  RngStream rng(41);
  for (int trial = 0; trial < 300; ++trial) {
    const int B = 1 + static_cast<int>(rng.uniform_below(12));
    std::vector<double> p(B);
    double min_p = 1.0;
    for (auto& v : p) {
      v = rng.uniform01_pos();
      min_p = std::min(min_p, v);
    }
    const double combined = combine_pvalues_bh(p);
    CHECK(combined >= min_p);
    CHECK(combined <= std::min(1.0, B * min_p) + 1e-15);

    // Raising one entry never lowers the combination.
    std::vector<double> raised(p);
    const std::size_t idx = rng.uniform_below(B);
    raised[idx] = raised[idx] + (1.0 - raised[idx]) * rng.uniform01();
    CHECK(combine_pvalues_bh(raised) >= combined - 1e-15);
  }
}

TEST_CASE("Bonferroni combination") {
  CHECK(combine_pvalues_bonferroni({0.01, 0.04, 0.5}) == doctest::Approx(0.03));
  CHECK(combine_pvalues_bonferroni({0.9, 0.8}) == 1.0);
  CHECK_THROWS_AS(combine_pvalues_bonferroni({}), input_error);
}

TEST_CASE("rpbt on identical samples accepts with p = 1") {
  RngStream rng(43);
  const CompositionalDataset X = random_dataset(8, 3, rng);
  const TestResult r = rpbt_test(X, X, 50, 7);
  CHECK(r.method == TestMethod::rpbt);
  CHECK(r.p_values[0] == 1.0);
  CHECK(r.statistics[0] == 0.0);
  CHECK(r.replications == 50);
}

TEST_CASE("rpbt is deterministic in the seed") {
  RngStream rng(47);
  const CompositionalDataset X = random_dataset(20, 4, rng);
  const CompositionalDataset Y = random_dataset(25, 4, rng);
  const TestResult a = rpbt_test(X, Y, 60, 11);
  const TestResult b = rpbt_test(X, Y, 60, 11);
  CHECK(a.p_values[0] == b.p_values[0]);
  CHECK(a.statistics[0] == b.statistics[0]);

  const TestResult bonf = rpbt_test(X, Y, 60, 11, PvalueCombination::bonferroni);
  CHECK(bonf.p_values[0] >= a.p_values[0] - 1e-15);  // Bonferroni is never smaller
}

TEST_CASE("rpbt separates clearly different samples") {
  RngStream rng(53);
  Eigen::MatrixXd raw1(60, 3), raw2(60, 3);
  for (Eigen::Index i = 0; i < 60; ++i) {
    raw1.row(i) << 8 + rng.uniform01(), 1 + rng.uniform01(), 1 + rng.uniform01();
    raw2.row(i) << 1 + rng.uniform01(), 8 + rng.uniform01(), 1 + rng.uniform01();
  }
  const TestResult r = rpbt_test(CompositionalDataset::close_rows(raw1),
                                 CompositionalDataset::close_rows(raw2), 100, 5);
  CHECK(r.p_values[0] < 1e-4);
}
