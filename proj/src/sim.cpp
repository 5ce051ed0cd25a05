#include "aebt/sim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "aebt/energy.hpp"
#include "aebt/errors.hpp"
#include "aebt/parallel.hpp"
#include "aebt/rpbt.hpp"

namespace aebt {

namespace {

// Substream address tags; the only requirement is that they stay distinct
// and never change, or seeds stop reproducing published runs.
constexpr std::uint64_t kTagParams = 1;
constexpr std::uint64_t kTagType1 = 2;
constexpr std::uint64_t kTagPower = 3;
constexpr std::uint64_t kTagSampleA = 4;
constexpr std::uint64_t kTagSampleB = 5;
constexpr std::uint64_t kTagPermutation = 6;
constexpr std::uint64_t kTagProjection = 7;

std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> path) {
  for (std::uint64_t p : path) base = mix_seed(base, p);
  return base;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void check_config(const ScenarioConfig& c) {
  if (c.D < 2) throw input_error("config: D must be at least 2");
  if (c.n < 2) throw input_error("config: n must be at least 2");
  if (c.mc_reps < 1) throw input_error("config: mc_reps must be at least 1");
  if (c.alpha_values.empty()) throw input_error("config: alpha grid is empty");
  if (c.k_grid.empty()) throw input_error("config: k grid is empty");
  if (!(c.level > 0.0 && c.level < 1.0)) throw input_error("config: level must lie in (0, 1)");
  if (c.R_permutations < 1) throw input_error("config: permutations must be at least 1");
  if (c.B_projections < 1) throw input_error("config: projections must be at least 1");
}

std::vector<AlphaParam> to_alpha_params(const std::vector<double>& values) {
  std::vector<AlphaParam> out;
  out.reserve(values.size());
  for (double v : values) out.emplace_back(v);
  return out;
}

// Rejection flags for one replicate: one per alpha, then the RPBT.
struct RepOutcome {
  std::vector<std::uint8_t> ebt_reject;
  std::uint8_t rpbt_reject = 0;
};

RepOutcome run_both_tests(const CompositionalDataset& a, const CompositionalDataset& b,
                          const std::vector<AlphaParam>& alphas, const ScenarioConfig& cfg,
                          std::uint64_t rep_key) {
  RepOutcome out;
  const TestResult ebt = permutation_test({a, b}, alphas, cfg.R_permutations,
                                          mix_seed(rep_key, kTagPermutation), cfg.standardize);
  out.ebt_reject.resize(alphas.size());
  for (std::size_t j = 0; j < alphas.size(); ++j)
    out.ebt_reject[j] = ebt.p_values[j] <= cfg.level ? 1 : 0;
  const TestResult rp =
      rpbt_test(a, b, cfg.B_projections, mix_seed(rep_key, kTagProjection));
  out.rpbt_reject = rp.p_values[0] <= cfg.level ? 1 : 0;
  return out;
}

std::vector<ExperimentRow> summarize(const std::vector<RepOutcome>& outcomes,
                                     const ScenarioConfig& cfg, int scenario_id, double k,
                                     double kl) {
  std::vector<ExperimentRow> rows;
  for (std::size_t j = 0; j < cfg.alpha_values.size(); ++j) {
    int hits = 0;
    for (const auto& o : outcomes) hits += o.ebt_reject[j];
    rows.push_back({scenario_id, cfg.D, cfg.n, k, kl, "alpha_ebt", cfg.alpha_values[j],
                    static_cast<double>(hits) / cfg.mc_reps, cfg.mc_reps, cfg.seed});
  }
  int hits = 0;
  for (const auto& o : outcomes) hits += o.rpbt_reject;
  rows.push_back({scenario_id, cfg.D, cfg.n, k, kl, "rpbt", std::nullopt,
                  static_cast<double>(hits) / cfg.mc_reps, cfg.mc_reps, cfg.seed});
  return rows;
}

}  // namespace

std::vector<double> ScenarioConfig::default_k_grid() {
  std::vector<double> grid;
  for (int i = 0; i <= 10; ++i) grid.push_back(1.0 + 0.1 * i);
  return grid;
}

ScenarioGenerator::ScenarioGenerator(int scenario_id, int D, std::uint64_t seed)
    : scenario_id_(scenario_id), D_(D) {
  if (scenario_id < 1 || scenario_id > 5)
    throw input_error("scenario_id must lie in 1..5");
  if (D < 2) throw input_error("scenario: D must be at least 2");
  if (scenario_id_ >= 2) {
    const std::uint64_t param_key =
        derive_seed(seed, {kTagParams, static_cast<std::uint64_t>(scenario_id),
                           static_cast<std::uint64_t>(D)});
    RngStream mu_stream(param_key, 0);
    mu_.resize(D - 1);
    for (Eigen::Index i = 0; i < mu_.size(); ++i) mu_[i] = mu_stream.normal();
    RngStream sigma_stream(param_key, 1);
    sigma_ = generate_covariance(D - 1, sigma_stream);
  }
}

double ScenarioGenerator::kl(double k) const {
  const Eigen::VectorXd threes = Eigen::VectorXd::Constant(D_, 3.0);
  switch (scenario_id_) {
    case 1:
      return kl_dirichlet(DirichletParams(k * threes), DirichletParams(threes));
    case 2:
      return kl_mvn(k * mu_, sigma_, mu_, sigma_);
    case 3:
      return kl_mvn(mu_, k * sigma_, mu_, sigma_);
    case 4:
      return kl_mvn(k * mu_, k * sigma_, mu_, sigma_);
    case 5:
      return kl_mvn(mu_, k * sigma_, k * mu_, sigma_);
  }
  throw input_error("scenario_id must lie in 1..5");
}

CompositionalDataset ScenarioGenerator::sample_first(double k, int n, RngStream& rng) const {
  switch (scenario_id_) {
    case 1:
      return sample_dirichlet(DirichletParams(Eigen::VectorXd::Constant(D_, 3.0 * k)), n, rng);
    case 2:
      return sample_simplicial_normal({k * mu_, sigma_}, n, rng);
    case 3:
      return sample_simplicial_normal({mu_, k * sigma_}, n, rng);
    case 4:
      return sample_simplicial_normal({k * mu_, k * sigma_}, n, rng);
    case 5:
      return sample_simplicial_normal({mu_, k * sigma_}, n, rng);
  }
  throw input_error("scenario_id must lie in 1..5");
}

CompositionalDataset ScenarioGenerator::sample_second(double k, int n, RngStream& rng) const {
  switch (scenario_id_) {
    case 1:
      return sample_dirichlet(DirichletParams(Eigen::VectorXd::Constant(D_, 3.0)), n, rng);
    case 2:
    case 3:
    case 4:
      return sample_simplicial_normal({mu_, sigma_}, n, rng);
    case 5:
      return sample_simplicial_normal({k * mu_, sigma_}, n, rng);
  }
  throw input_error("scenario_id must lie in 1..5");
}

std::vector<ExperimentRow> run_type1_experiment(const ScenarioConfig& config,
                                                NullFamily family) {
  check_config(config);
  const std::vector<AlphaParam> alphas = to_alpha_params(config.alpha_values);
  const std::uint64_t family_tag = family == NullFamily::dirichlet ? 10 : 11;

  // Null generators; the normal family fixes (mu, Sigma) per (family, D).
  std::optional<SimplicialNormalParams> normal_params;
  if (family == NullFamily::simplicial_normal) {
    const std::uint64_t param_key = derive_seed(
        config.seed, {kTagParams, family_tag, static_cast<std::uint64_t>(config.D)});
    RngStream mu_stream(param_key, 0);
    Eigen::VectorXd mu(config.D - 1);
    for (Eigen::Index i = 0; i < mu.size(); ++i) mu[i] = mu_stream.normal();
    RngStream sigma_stream(param_key, 1);
    normal_params.emplace(std::move(mu), generate_covariance(config.D - 1, sigma_stream));
  }
  const DirichletParams dir_params(Eigen::VectorXd::Constant(config.D, 3.0));

  std::vector<RepOutcome> outcomes(config.mc_reps);
  parallel_for(config.mc_reps, config.threads, [&](int i) {
    const std::uint64_t rep_key = derive_seed(
        config.seed, {kTagType1, family_tag, static_cast<std::uint64_t>(config.D),
                      static_cast<std::uint64_t>(config.n), static_cast<std::uint64_t>(i)});
    RngStream stream_a(rep_key, kTagSampleA);
    RngStream stream_b(rep_key, kTagSampleB);
    CompositionalDataset a = family == NullFamily::dirichlet
                                 ? sample_dirichlet(dir_params, config.n, stream_a)
                                 : sample_simplicial_normal(*normal_params, config.n, stream_a);
    CompositionalDataset b = family == NullFamily::dirichlet
                                 ? sample_dirichlet(dir_params, config.n, stream_b)
                                 : sample_simplicial_normal(*normal_params, config.n, stream_b);
    outcomes[i] = run_both_tests(a, b, alphas, config, rep_key);
  });

  return summarize(outcomes, config, 0, 1.0, 0.0);
}

std::vector<ExperimentRow> run_power_scenario(const ScenarioConfig& config) {
  check_config(config);
  const std::vector<AlphaParam> alphas = to_alpha_params(config.alpha_values);
  const ScenarioGenerator gen(config.scenario_id, config.D, config.seed);

  std::vector<ExperimentRow> rows;
  for (std::size_t ki = 0; ki < config.k_grid.size(); ++ki) {
    const double k = config.k_grid[ki];
    const double kl = gen.kl(k);
    std::vector<RepOutcome> outcomes(config.mc_reps);
    parallel_for(config.mc_reps, config.threads, [&](int i) {
      const std::uint64_t rep_key = derive_seed(
          config.seed,
          {kTagPower, static_cast<std::uint64_t>(config.scenario_id),
           static_cast<std::uint64_t>(config.D), static_cast<std::uint64_t>(config.n),
           static_cast<std::uint64_t>(ki), static_cast<std::uint64_t>(i)});
      RngStream stream_a(rep_key, kTagSampleA);
      RngStream stream_b(rep_key, kTagSampleB);
      const CompositionalDataset a = gen.sample_first(k, config.n, stream_a);
      const CompositionalDataset b = gen.sample_second(k, config.n, stream_b);
      outcomes[i] = run_both_tests(a, b, alphas, config, rep_key);
    });
    for (auto& row : summarize(outcomes, config, config.scenario_id, k, kl))
      rows.push_back(std::move(row));
  }
  return rows;
}

void write_results(const std::vector<ExperimentRow>& rows, ResultFormat format,
                   std::ostream& out) {
  if (rows.empty()) throw input_error("write_results: no rows");
  if (format == ResultFormat::json) {
    out << rows_to_json(rows) << '\n';
    return;
  }
  out << "scenario_id,D,n,k,kl,method,alpha,rejection_rate,mc_reps,seed\n";
  for (const auto& r : rows) {
    out << r.scenario_id << ',' << r.D << ',' << r.n << ',' << format_double(r.k) << ','
        << format_double(r.kl) << ',' << r.method << ','
        << (r.alpha ? format_double(*r.alpha) : std::string()) << ','
        << format_double(r.rejection_rate) << ',' << r.mc_reps << ',' << r.seed << '\n';
  }
}

void write_results(const std::vector<ExperimentRow>& rows, ResultFormat format,
                   const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw input_error("write_results: cannot open '" + path.string() + "'");
  write_results(rows, format, out);
  out.flush();
  if (!out) throw input_error("write_results: failed writing '" + path.string() + "'");
}

std::string rows_to_json(const std::vector<ExperimentRow>& rows) {
  nlohmann::json doc = nlohmann::json::array();
  for (const auto& r : rows) {
    nlohmann::json j{{"scenario_id", r.scenario_id},
                     {"D", r.D},
                     {"n", r.n},
                     {"k", r.k},
                     {"kl", r.kl},
                     {"method", r.method},
                     {"rejection_rate", r.rejection_rate},
                     {"mc_reps", r.mc_reps},
                     {"seed", r.seed}};
    j["alpha"] = r.alpha ? nlohmann::json(*r.alpha) : nlohmann::json(nullptr);
    doc.push_back(std::move(j));
  }
  return doc.dump(2);
}

std::vector<ExperimentRow> rows_from_json(const std::string& text) {
  const nlohmann::json doc = nlohmann::json::parse(text);
  std::vector<ExperimentRow> rows;
  for (const auto& j : doc) {
    ExperimentRow r;
    r.scenario_id = j.at("scenario_id").get<int>();
    r.D = j.at("D").get<int>();
    r.n = j.at("n").get<int>();
    r.k = j.at("k").get<double>();
    r.kl = j.at("kl").get<double>();
    r.method = j.at("method").get<std::string>();
    if (!j.at("alpha").is_null()) r.alpha = j.at("alpha").get<double>();
    r.rejection_rate = j.at("rejection_rate").get<double>();
    r.mc_reps = j.at("mc_reps").get<int>();
    r.seed = j.at("seed").get<std::uint64_t>();
    rows.push_back(std::move(r));
  }
  return rows;
}

namespace {

std::string curve_color(const std::string& method, std::optional<double> alpha,
                        std::size_t fallback_index) {
  if (method == "rpbt") return "red";
  if (alpha && *alpha == 1.0) return "blue";
  if (alpha && *alpha == 0.1) return "green";
  static const char* palette[] = {"orange", "purple", "brown", "magenta", "teal"};
  return palette[fallback_index % 5];
}

std::string format_coord(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

}  // namespace

void emit_power_plot(const std::vector<ExperimentRow>& rows,
                     const std::filesystem::path& path) {
  if (rows.empty()) throw input_error("emit_power_plot: no rows");
  for (const auto& r : rows)
    if (r.scenario_id != rows.front().scenario_id)
      throw input_error("emit_power_plot: mixed scenarios");

  // Curves keyed by (method, alpha, n), in first-appearance order.
  struct Curve {
    std::string label;
    std::string color;
    std::vector<std::pair<double, double>> points;  // (kl, rate)
  };
  bool multiple_n = false;
  for (const auto& r : rows) multiple_n |= r.n != rows.front().n;

  std::vector<Curve> curves;
  std::map<std::string, std::size_t> index;
  for (const auto& r : rows) {
    std::string key = r.method + '|' + (r.alpha ? format_double(*r.alpha) : "-") + '|' +
                      (multiple_n ? std::to_string(r.n) : std::string());
    auto it = index.find(key);
    if (it == index.end()) {
      Curve c;
      if (r.method == "rpbt") {
        c.label = "RPBT";
      } else {
        std::ostringstream label;
        label << "alpha-EBT (alpha=" << (r.alpha ? *r.alpha : 0.0) << ")";
        c.label = label.str();
      }
      if (multiple_n) c.label += ", n=" + std::to_string(r.n);
      c.color = curve_color(r.method, r.alpha, curves.size());
      it = index.emplace(key, curves.size()).first;
      curves.push_back(std::move(c));
    }
    curves[it->second].points.emplace_back(r.kl, std::clamp(r.rejection_rate, 0.0, 1.0));
  }
  for (auto& c : curves)
    std::sort(c.points.begin(), c.points.end());

  double max_kl = 0.0;
  for (const auto& r : rows) max_kl = std::max(max_kl, r.kl);
  if (max_kl <= 0.0) max_kl = 1.0;

  const double width = 720, height = 480;
  const double x0 = 70, x1 = 500, y0 = 420, y1 = 40;  // y grows downward in SVG
  const auto sx = [&](double kl) { return x0 + (x1 - x0) * kl / max_kl; };
  const auto sy = [&](double rate) { return y0 + (y1 - y0) * rate; };

  std::ofstream out(path, std::ios::binary);
  if (!out) throw input_error("emit_power_plot: cannot open '" + path.string() + "'");

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
      << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
  out << "  <rect width=\"" << width << "\" height=\"" << height << "\" fill=\"white\"/>\n";

  // Axes.
  out << "  <line x1=\"" << x0 << "\" y1=\"" << y0 << "\" x2=\"" << x1 << "\" y2=\"" << y0
      << "\" stroke=\"black\"/>\n";
  out << "  <line x1=\"" << x0 << "\" y1=\"" << y0 << "\" x2=\"" << x0 << "\" y2=\"" << y1
      << "\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double frac = i / 4.0;
    const double xt = x0 + (x1 - x0) * frac;
    const double yt = y0 + (y1 - y0) * frac;
    char label[32];
    std::snprintf(label, sizeof label, "%.3g", max_kl * frac);
    out << "  <line x1=\"" << format_coord(xt) << "\" y1=\"" << y0 << "\" x2=\""
        << format_coord(xt) << "\" y2=\"" << y0 + 5 << "\" stroke=\"black\"/>\n";
    out << "  <text x=\"" << format_coord(xt) << "\" y=\"" << y0 + 20
        << "\" font-size=\"12\" text-anchor=\"middle\">" << label << "</text>\n";
    std::snprintf(label, sizeof label, "%.2f", frac);
    out << "  <line x1=\"" << x0 - 5 << "\" y1=\"" << format_coord(yt) << "\" x2=\"" << x0
        << "\" y2=\"" << format_coord(yt) << "\" stroke=\"black\"/>\n";
    out << "  <text x=\"" << x0 - 10 << "\" y=\"" << format_coord(yt + 4)
        << "\" font-size=\"12\" text-anchor=\"end\">" << label << "</text>\n";
  }
  out << "  <text x=\"" << (x0 + x1) / 2 << "\" y=\"" << y0 + 40
      << "\" font-size=\"14\" text-anchor=\"middle\">KL divergence</text>\n";
  out << "  <text x=\"18\" y=\"" << (y0 + y1) / 2
      << "\" font-size=\"14\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
      << (y0 + y1) / 2 << ")\">Rejection rate</text>\n";

  for (const auto& c : curves) {
    out << "  <polyline fill=\"none\" stroke=\"" << c.color << "\" stroke-width=\"2\" points=\"";
    for (const auto& [kl, rate] : c.points)
      out << format_coord(sx(kl)) << ',' << format_coord(sy(rate)) << ' ';
    out << "\"/>\n";
    for (const auto& [kl, rate] : c.points)
      out << "  <circle cx=\"" << format_coord(sx(kl)) << "\" cy=\"" << format_coord(sy(rate))
          << "\" r=\"3\" fill=\"" << c.color << "\"/>\n";
  }

  // Legend.
  for (std::size_t i = 0; i < curves.size(); ++i) {
    const double ly = y1 + 10 + 22 * static_cast<double>(i);
    out << "  <line x1=\"" << x1 + 16 << "\" y1=\"" << format_coord(ly) << "\" x2=\""
        << x1 + 44 << "\" y2=\"" << format_coord(ly) << "\" stroke=\"" << curves[i].color
        << "\" stroke-width=\"2\"/>\n";
    out << "  <text x=\"" << x1 + 50 << "\" y=\"" << format_coord(ly + 4)
        << "\" font-size=\"12\">" << curves[i].label << "</text>\n";
  }

  out << "</svg>\n";
  if (!out) throw input_error("emit_power_plot: failed writing '" + path.string() + "'");
}

}  // namespace aebt
