// Command-line front end: run the equality-of-distributions tests on CSV
// data, or reproduce the Type I error and power experiments.
//
// Exit codes: 0 success, 2 input/validation error, 3 numeric failure.

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "aebt/csv.hpp"
#include "aebt/energy.hpp"
#include "aebt/errors.hpp"
#include "aebt/rpbt.hpp"
#include "aebt/sim.hpp"

namespace {

struct TestOptions {
  std::string file1, file2;
  std::string method = "alpha-ebt";
  std::vector<double> alphas = {1.0};
  int permutations = 999;
  int projections = 100;
  bool standardize = false;
  std::uint64_t seed = 0;
  std::string combine = "bh";
  std::string out;
  std::string format = "json";
};

struct SimulateOptions {
  std::string family;  // type1 only
  int scenario = 1;    // power only
  std::vector<int> dims = {3};
  int power_dim = 10;
  std::vector<int> sizes = {50};
  std::string k_grid = "1:2:0.1";
  std::vector<double> alphas;
  int reps = 500;
  int permutations = 299;
  int projections = 100;
  double level = 0.05;
  std::uint64_t seed = 0;
  int threads = static_cast<int>(std::thread::hardware_concurrency());
  bool standardize = false;
  std::string out;
  std::string format = "csv";
  std::string plot;
};

std::vector<double> parse_k_grid(const std::string& text) {
  double from = 0, to = 0, step = 0;
  if (std::sscanf(text.c_str(), "%lf:%lf:%lf", &from, &to, &step) != 3 || step <= 0 ||
      to < from)
    throw aebt::input_error("--k-grid expects a:b:step with step > 0, got '" + text + "'");
  std::vector<double> grid;
  const int count = static_cast<int>(std::floor((to - from) / step + 1e-9)) + 1;
  for (int i = 0; i < count; ++i) grid.push_back(from + step * i);
  return grid;
}

std::string format_sig17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_document(const std::string& text, const std::string& out_path) {
  std::cout << text;
  if (!out_path.empty()) {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw aebt::input_error("cannot open '" + out_path + "'");
    out << text;
  }
}

int run_test(const TestOptions& opt) {
  const auto started = std::chrono::steady_clock::now();
  const aebt::CompositionalDataset x = aebt::read_dataset_csv(opt.file1);
  const aebt::CompositionalDataset y = aebt::read_dataset_csv(opt.file2);
  if (x.dimension() != y.dimension())
    throw aebt::input_error("datasets have different dimensions (" +
                            std::to_string(x.dimension()) + " vs " +
                            std::to_string(y.dimension()) + ")");

  aebt::TestResult result;
  if (opt.method == "alpha-ebt") {
    std::vector<aebt::AlphaParam> alphas;
    for (double a : opt.alphas) alphas.emplace_back(a);
    result = aebt::permutation_test({x, y}, alphas, opt.permutations, opt.seed,
                                    opt.standardize);
  } else {
    result = aebt::rpbt_test(x, y, opt.projections, opt.seed,
                             opt.combine == "bonferroni"
                                 ? aebt::PvalueCombination::bonferroni
                                 : aebt::PvalueCombination::benjamini_heller);
  }
  const double runtime =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();

  if (opt.format == "json") {
    nlohmann::json doc;
    doc["method"] = aebt::to_string(result.method);
    doc["n"] = {x.n(), y.n()};
    doc["D"] = x.dimension();
    doc["replications"] = result.replications;
    doc["seed"] = result.seed;
    doc["standardize"] = result.standardized;
    doc["runtime_seconds"] = runtime;
    nlohmann::json entries = nlohmann::json::array();
    for (std::size_t i = 0; i < result.p_values.size(); ++i) {
      nlohmann::json entry;
      entry["alpha"] = result.alphas.empty() ? nlohmann::json(nullptr)
                                             : nlohmann::json(result.alphas[i]);
      entry["statistic"] = result.statistics[i];
      entry["p_value"] = result.p_values[i];
      entries.push_back(std::move(entry));
    }
    doc["results"] = std::move(entries);
    write_document(doc.dump(2) + "\n", opt.out);
  } else {
    std::string text = "method,alpha,statistic,p_value,replications,seed,n1,n2,D,runtime_seconds\n";
    for (std::size_t i = 0; i < result.p_values.size(); ++i) {
      text += aebt::to_string(result.method);
      text += ',';
      text += result.alphas.empty() ? std::string() : format_sig17(result.alphas[i]);
      text += ',' + format_sig17(result.statistics[i]) + ',' + format_sig17(result.p_values[i]);
      text += ',' + std::to_string(result.replications) + ',' + std::to_string(result.seed);
      text += ',' + std::to_string(x.n()) + ',' + std::to_string(y.n()) + ',' +
              std::to_string(x.dimension()) + ',' + format_sig17(runtime) + '\n';
    }
    write_document(text, opt.out);
  }
  return 0;
}

int run_type1(const SimulateOptions& opt) {
  const aebt::NullFamily family = opt.family == "dirichlet"
                                      ? aebt::NullFamily::dirichlet
                                      : aebt::NullFamily::simplicial_normal;
  std::vector<aebt::ExperimentRow> rows;
  for (int d : opt.dims) {
    for (int n : opt.sizes) {
      aebt::ScenarioConfig cfg;
      cfg.D = d;
      cfg.n = n;
      cfg.alpha_values = opt.alphas.empty() ? std::vector<double>{1.0} : opt.alphas;
      cfg.mc_reps = opt.reps;
      cfg.R_permutations = opt.permutations;
      cfg.B_projections = opt.projections;
      cfg.level = opt.level;
      cfg.seed = opt.seed;
      cfg.standardize = opt.standardize;
      cfg.threads = opt.threads;
      std::cerr << "type1: family=" << opt.family << " D=" << d << " n=" << n << " reps="
                << opt.reps << "\n";
      for (auto& row : aebt::run_type1_experiment(cfg, family)) rows.push_back(std::move(row));
    }
  }
  const aebt::ResultFormat format =
      opt.format == "json" ? aebt::ResultFormat::json : aebt::ResultFormat::csv;
  const std::string out_path =
      opt.out.empty() ? "type1_results." + opt.format : opt.out;
  aebt::write_results(rows, format, std::filesystem::path(out_path));
  aebt::write_results(rows, format, std::cout);
  return 0;
}

int run_power(const SimulateOptions& opt) {
  std::vector<aebt::ExperimentRow> rows;
  for (int n : opt.sizes) {
    aebt::ScenarioConfig cfg;
    cfg.scenario_id = opt.scenario;
    cfg.D = opt.power_dim;
    cfg.n = n;
    cfg.k_grid = parse_k_grid(opt.k_grid);
    cfg.alpha_values = opt.alphas.empty() ? std::vector<double>{0.1, 1.0} : opt.alphas;
    cfg.mc_reps = opt.reps;
    cfg.R_permutations = opt.permutations;
    cfg.B_projections = opt.projections;
    cfg.level = opt.level;
    cfg.seed = opt.seed;
    cfg.standardize = opt.standardize;
    cfg.threads = opt.threads;
    std::cerr << "power: scenario=" << opt.scenario << " D=" << opt.power_dim << " n=" << n
              << " reps=" << opt.reps << "\n";
    for (auto& row : aebt::run_power_scenario(cfg)) rows.push_back(std::move(row));
  }
  const aebt::ResultFormat format =
      opt.format == "json" ? aebt::ResultFormat::json : aebt::ResultFormat::csv;
  const std::string out_path =
      opt.out.empty() ? "power_results." + opt.format : opt.out;
  aebt::write_results(rows, format, std::filesystem::path(out_path));
  aebt::write_results(rows, format, std::cout);
  if (!opt.plot.empty()) aebt::emit_power_plot(rows, std::filesystem::path(opt.plot));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Equality-of-distributions testing for compositional data"};
  app.require_subcommand(1);

  TestOptions test_opt;
  CLI::App* test = app.add_subcommand("test", "Test two CSV datasets for equal distributions");
  test->add_option("--file1", test_opt.file1, "First dataset (CSV)")->required();
  test->add_option("--file2", test_opt.file2, "Second dataset (CSV)")->required();
  test->add_option("--method", test_opt.method, "Test to run")
      ->check(CLI::IsMember({"alpha-ebt", "rpbt"}))
      ->capture_default_str();
  test->add_option("--alpha", test_opt.alphas, "Alpha value(s) for the alpha-EBT")
      ->delimiter(',')
      ->capture_default_str();
  test->add_option("--permutations", test_opt.permutations, "Permutations R")
      ->capture_default_str();
  test->add_option("--projections", test_opt.projections, "Projections B (rpbt)")
      ->capture_default_str();
  test->add_flag("--standardize", test_opt.standardize,
                 "Column-standardize pooled transformed data");
  test->add_option("--seed", test_opt.seed, "RNG seed")->capture_default_str();
  test->add_option("--combine", test_opt.combine, "RPBT p-value combination")
      ->check(CLI::IsMember({"bh", "bonferroni"}))
      ->capture_default_str();
  test->add_option("--out", test_opt.out, "Also write the result document here");
  test->add_option("--format", test_opt.format, "Document format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();

  SimulateOptions sim_opt;
  CLI::App* simulate = app.add_subcommand("simulate", "Monte Carlo experiments");
  simulate->require_subcommand(1);

  CLI::App* type1 = simulate->add_subcommand("type1", "Estimate Type I error under the null");
  type1->add_option("--family", sim_opt.family, "Null data generator")
      ->check(CLI::IsMember({"dirichlet", "normal"}))
      ->required();
  type1->add_option("--dims", sim_opt.dims, "Simplex dimensions D")
      ->delimiter(',')
      ->capture_default_str();
  type1->add_option("--sizes", sim_opt.sizes, "Sample sizes n")
      ->delimiter(',')
      ->capture_default_str();

  CLI::App* power = simulate->add_subcommand("power", "Estimate power along the k grid");
  power->add_option("--scenario", sim_opt.scenario, "Scenario 1..5")
      ->check(CLI::Range(1, 5))
      ->capture_default_str();
  power->add_option("--dims", sim_opt.power_dim, "Simplex dimension D")->capture_default_str();
  power->add_option("--sizes", sim_opt.sizes, "Sample sizes n")
      ->delimiter(',')
      ->capture_default_str();
  power->add_option("--k-grid", sim_opt.k_grid, "Divergence grid a:b:step")
      ->capture_default_str();
  power->add_option("--plot", sim_opt.plot, "Write an SVG of the power curves here");

  for (CLI::App* sub : {type1, power}) {
    sub->add_option("--alpha", sim_opt.alphas,
                    "Alpha value(s) for the alpha-EBT (default: 1.0 for type1, 0.1,1.0 for power)")
        ->delimiter(',');
    sub->add_option("--reps", sim_opt.reps, "Monte Carlo replications")->capture_default_str();
    sub->add_option("--permutations", sim_opt.permutations, "Permutations R")
        ->capture_default_str();
    sub->add_option("--projections", sim_opt.projections, "Projections B")
        ->capture_default_str();
    sub->add_option("--level", sim_opt.level, "Nominal test level")->capture_default_str();
    sub->add_option("--seed", sim_opt.seed, "Master RNG seed")->capture_default_str();
    sub->add_option("--threads", sim_opt.threads, "Worker threads")->capture_default_str();
    sub->add_flag("--standardize", sim_opt.standardize,
                  "Column-standardize pooled transformed data");
    sub->add_option("--out", sim_opt.out, "Output table path");
    sub->add_option("--format", sim_opt.format, "Output table format")
        ->check(CLI::IsMember({"csv", "json"}));
  }

  try {
    app.parse(argc, argv);
    if (test->parsed()) return run_test(test_opt);
    if (type1->parsed()) return run_type1(sim_opt);
    if (power->parsed()) return run_power(sim_opt);
    return 2;
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const aebt::input_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return 3;
  }
}
