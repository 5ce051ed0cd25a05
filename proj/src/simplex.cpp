#include "aebt/simplex.hpp"

#include <cmath>

#include "aebt/errors.hpp"

namespace aebt {

Composition close(const Eigen::VectorXd& raw) {
  if (raw.size() < 2) throw input_error("close: need at least two components");
  double sum = 0.0;
  for (Eigen::Index i = 0; i < raw.size(); ++i) {
    const double v = raw[i];
    if (!std::isfinite(v)) throw input_error("close: non-finite component");
    if (v < 0.0) throw input_error("close: negative component");
    sum += v;
  }
  if (sum == 0.0) throw input_error("close: degenerate composition (all components zero)");
  return Composition(raw / sum);
}

CompositionalDataset CompositionalDataset::close_rows(const Eigen::MatrixXd& raw,
                                                      std::vector<std::string> names) {
  if (raw.cols() < 2) throw input_error("dataset: need at least two components");
  if (!names.empty() && static_cast<Eigen::Index>(names.size()) != raw.cols())
    throw input_error("dataset: component_names length must match dimension");
  Eigen::MatrixXd rows(raw.rows(), raw.cols());
  for (Eigen::Index i = 0; i < raw.rows(); ++i) {
    try {
      rows.row(i) = close(raw.row(i).transpose()).values().transpose();
    } catch (const input_error& e) {
      throw input_error("row " + std::to_string(i + 1) + ": " + e.what());
    }
  }
  return CompositionalDataset(std::move(rows), std::move(names));
}

CompositionalDataset CompositionalDataset::from_matrix(Eigen::MatrixXd rows,
                                                       std::vector<std::string> names) {
  if (!names.empty() && static_cast<Eigen::Index>(names.size()) != rows.cols())
    throw input_error("dataset: component_names length must match dimension");
  return CompositionalDataset(std::move(rows), std::move(names));
}

AlphaParam::AlphaParam(double value) : value_(value) {
  if (!(value >= -1.0 && value <= 1.0))
    throw input_error("alpha must lie in [-1, 1]");
}

ValidationReport validate_dataset(const CompositionalDataset& data,
                                  bool require_strictly_positive) {
  ValidationReport report;
  const Eigen::MatrixXd& m = data.matrix();
  if (m.cols() < 2)
    report.violations.push_back({-1, -1, "fewer than two components"});
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    double sum = 0.0;
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      const double v = m(i, j);
      if (!std::isfinite(v)) {
        report.violations.push_back({i, j, "non-finite component"});
        continue;
      }
      if (v < 0.0) report.violations.push_back({i, j, "negative component"});
      if (require_strictly_positive && v == 0.0)
        report.violations.push_back({i, j, "zero component"});
      sum += v;
    }
    if (std::abs(sum - 1.0) > kUnitSumTolerance)
      report.violations.push_back({i, -1, "sum != 1"});
  }
  return report;
}

bool has_zeros(const CompositionalDataset& data) {
  return (data.matrix().array() == 0.0).any();
}

}  // namespace aebt
