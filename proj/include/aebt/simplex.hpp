#pragma once

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace aebt {

// Absolute tolerance on the unit-sum constraint. Inputs within tolerance are
// re-closed on ingestion rather than rejected, so CSV round-trips survive.
inline constexpr double kUnitSumTolerance = 1e-10;

class CompositionalDataset;

// A point on the unit simplex: D >= 2 non-negative proportions summing to 1.
// Immutable after construction; the only public constructor is close().
class Composition {
 public:
  const Eigen::VectorXd& values() const { return values_; }
  Eigen::Index size() const { return values_.size(); }
  double operator[](Eigen::Index i) const { return values_[i]; }

 private:
  friend Composition close(const Eigen::VectorXd& raw);
  friend class CompositionalDataset;
  explicit Composition(Eigen::VectorXd v) : values_(std::move(v)) {}
  Eigen::VectorXd values_;
};

// Closure: divide a non-negative vector by its sum. Throws input_error with
// "negative component" / "degenerate composition" on bad input.
Composition close(const Eigen::VectorXd& raw);

// n observations of a shared dimension D, one composition per row.
// Immutable after construction.
class CompositionalDataset {
 public:
  // Closes every row; throws with the offending row index on failure.
  static CompositionalDataset close_rows(const Eigen::MatrixXd& raw,
                                         std::vector<std::string> component_names = {});
  // Stores the matrix as given; pair with validate_dataset() before use.
  static CompositionalDataset from_matrix(Eigen::MatrixXd rows,
                                          std::vector<std::string> component_names = {});

  const Eigen::MatrixXd& matrix() const { return rows_; }
  Eigen::Index n() const { return rows_.rows(); }
  Eigen::Index dimension() const { return rows_.cols(); }
  const std::vector<std::string>& component_names() const { return names_; }

  // Mints the stored row without re-closing; assumes a validated dataset.
  Composition row(Eigen::Index i) const { return Composition(rows_.row(i).transpose()); }

 private:
  CompositionalDataset(Eigen::MatrixXd rows, std::vector<std::string> names)
      : rows_(std::move(rows)), names_(std::move(names)) {}
  Eigen::MatrixXd rows_;
  std::vector<std::string> names_;
};

// The transformation parameter, restricted to [-1, 1]. The zero-data
// restriction (alpha > 0 whenever the data contain zeros) is enforced at the
// transform call sites, where the data are in hand.
class AlphaParam {
 public:
  explicit AlphaParam(double value);
  double value() const { return value_; }
  bool is_zero() const { return value_ == 0.0; }

 private:
  double value_;
};

struct Violation {
  Eigen::Index row;  // -1 for dataset-level findings
  Eigen::Index col;  // -1 for row-level findings
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
};

// Reports (never throws) every row failing the Composition invariants;
// with require_strictly_positive, additionally reports every zero entry.
ValidationReport validate_dataset(const CompositionalDataset& data,
                                  bool require_strictly_positive = false);

// True iff any entry is exactly 0.0. Subnormal positives count as positive;
// the alpha restriction concerns structural zeros only.
bool has_zeros(const CompositionalDataset& data);

}  // namespace aebt
