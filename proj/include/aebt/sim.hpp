#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "aebt/distributions.hpp"
#include "aebt/simplex.hpp"

namespace aebt {

// One Monte Carlo experiment cell: a generator family, a divergence grid,
// sample size, dimension, and test settings.
struct ScenarioConfig {
  int scenario_id = 1;  // 1..5
  int D = 10;
  int n = 50;  // both samples share n
  std::vector<double> k_grid = default_k_grid();
  std::vector<double> alpha_values = {0.1, 1.0};
  int mc_reps = 500;
  int R_permutations = 999;
  int B_projections = 100;
  double level = 0.05;
  std::uint64_t seed = 0;
  bool standardize = false;
  int threads = 1;

  static std::vector<double> default_k_grid();  // 1.0, 1.1, ..., 2.0
};

struct ExperimentRow {
  int scenario_id = 0;  // 0 for Type I runs
  int D = 0;
  int n = 0;
  double k = 1.0;
  double kl = 0.0;
  std::string method;  // "alpha_ebt" | "rpbt"
  std::optional<double> alpha;
  double rejection_rate = 0.0;
  int mc_reps = 0;
  std::uint64_t seed = 0;

  bool operator==(const ExperimentRow&) const = default;
};

enum class NullFamily { dirichlet, simplicial_normal };

// The two generators of a power scenario, with (mu, Sigma) drawn once per
// (scenario_id, D) from dedicated substreams of the seed and reused across
// the whole k grid.
class ScenarioGenerator {
 public:
  ScenarioGenerator(int scenario_id, int D, std::uint64_t seed);

  // KL divergence of the first generator from the second at this k.
  double kl(double k) const;
  CompositionalDataset sample_first(double k, int n, RngStream& rng) const;
  CompositionalDataset sample_second(double k, int n, RngStream& rng) const;

  int scenario_id() const { return scenario_id_; }

 private:
  int scenario_id_;
  int D_;
  Eigen::VectorXd mu_;     // scenarios 2-5
  Eigen::MatrixXd sigma_;  // scenarios 2-5
};

// Estimated Type I error at level under the named null family: per
// replicate, two independent samples from the same distribution, both tests.
// One row per (method, alpha).
std::vector<ExperimentRow> run_type1_experiment(const ScenarioConfig& config,
                                                NullFamily family);

// Estimated power along the k grid, with the generator KL divergence as the
// x coordinate of each row.
std::vector<ExperimentRow> run_power_scenario(const ScenarioConfig& config);

enum class ResultFormat { csv, json };

// Fixed CSV header scenario_id,D,n,k,kl,method,alpha,rejection_rate,mc_reps,seed;
// numbers carry 17 significant digits. Reruns with the same config and seed
// produce byte-identical bytes.
void write_results(const std::vector<ExperimentRow>& rows, ResultFormat format,
                   std::ostream& out);
void write_results(const std::vector<ExperimentRow>& rows, ResultFormat format,
                   const std::filesystem::path& path);

std::string rows_to_json(const std::vector<ExperimentRow>& rows);
std::vector<ExperimentRow> rows_from_json(const std::string& text);

// SVG power curves: x = KL divergence, y = rejection rate, one curve per
// (method, alpha) — split by n when several sample sizes are present.
// RPBT draws red, alpha-EBT draws blue at alpha = 1 and green at alpha = 0.1.
void emit_power_plot(const std::vector<ExperimentRow>& rows,
                     const std::filesystem::path& path);

}  // namespace aebt
