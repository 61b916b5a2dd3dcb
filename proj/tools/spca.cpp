// Command-line front-end: multi-start sparse PCA campaigns with JSON reports
// and plot-ready CSV emission.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "spca/multistart.hpp"
#include "spca/oracle.hpp"

namespace {

using spca::DataMatrix;
using spca::Formulation;
using spca::MultiStartPlan;
using spca::MultiStartReport;
using spca::RunStatus;
using spca::SolverConfig;
using spca::Strategy;

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitDegenerate = 3;

struct CampaignSpec {
  std::string input;
  std::string format = "auto";
  bool center = false;
  bool skip_header = false;
  std::string variance = "l2";
  std::string sparsity = "l0";
  std::string mode = "constraint";
  double s = 0.0;
  double gamma = -1.0;
  int starts = 1;
  std::string strategy = "nai";
  int batch = 1;
  std::uint64_t seed = 0;
  double tol = 1e-6;
  int max_iterations = 200;
  std::string scheme = "gaussian-sphere";
  std::string output;
};

void add_common_flags(CLI::App* cmd, CampaignSpec& spec) {
  cmd->add_option("--input", spec.input, "input matrix file")->required();
  cmd->add_option("--format", spec.format, "input format")
      ->check(CLI::IsMember({"auto", "matrix-market", "csv"}));
  cmd->add_flag("--center", spec.center, "center columns before solving");
  cmd->add_flag("--skip-header", spec.skip_header, "skip the first CSV row");
  cmd->add_option("--variance", spec.variance)->check(CLI::IsMember({"l2", "l1"}));
  cmd->add_option("--sparsity", spec.sparsity)->check(CLI::IsMember({"l0", "l1"}));
  cmd->add_option("--mode", spec.mode)
      ->check(CLI::IsMember({"constraint", "penalty"}));
  cmd->add_option("--s", spec.s, "cardinality budget (constraint mode)");
  cmd->add_option("--gamma", spec.gamma, "penalty weight (penalty mode)");
  cmd->add_option("--starts", spec.starts, "number of starting points l");
  cmd->add_option("--strategy", spec.strategy)
      ->check(CLI::IsMember({"nai", "sfa", "bat", "otf"}));
  cmd->add_option("--batch", spec.batch, "batch width r (bat/otf)");
  cmd->add_option("--seed", spec.seed, "starting-point seed");
  cmd->add_option("--tol", spec.tol, "relative merit-improvement tolerance");
  cmd->add_option("--max-iterations", spec.max_iterations);
  cmd->add_option("--scheme", spec.scheme, "starting-point scheme")
      ->check(CLI::IsMember({"gaussian-sphere", "column"}));
  cmd->add_option("--output", spec.output, "report file (default: stdout)");
}

DataMatrix load_input(const CampaignSpec& spec) {
  spca::MatrixFormat fmt = spca::MatrixFormat::auto_detect;
  if (spec.format == "matrix-market") fmt = spca::MatrixFormat::matrix_market;
  if (spec.format == "csv") fmt = spca::MatrixFormat::csv;
  DataMatrix A = spca::load_matrix(spec.input, fmt, spec.skip_header);
  if (spec.center) A = spca::center_columns(A);
  return A;
}

Formulation make_formulation(const CampaignSpec& spec, int p) {
  Formulation f;
  f.variance = spec.variance == "l2" ? spca::VarianceNorm::l2 : spca::VarianceNorm::l1;
  f.sparsity = spec.sparsity == "l0" ? spca::SparsityNorm::l0 : spca::SparsityNorm::l1;
  f.mode = spec.mode == "constraint" ? spca::SparsityMode::constraint
                                     : spca::SparsityMode::penalty;
  if (f.mode == spca::SparsityMode::constraint) {
    if (spec.s < 1.0 || spec.s > static_cast<double>(p))
      throw std::invalid_argument("s must be in [1, " + std::to_string(p) + "]");
    f.param = spec.s;
  } else {
    if (spec.gamma < 0.0)
      throw std::invalid_argument("gamma must be >= 0 in penalty mode");
    f.param = spec.gamma;
  }
  return f;
}

MultiStartPlan make_plan(const CampaignSpec& spec) {
  MultiStartPlan plan;
  plan.l = spec.starts;
  plan.strategy = spca::strategy_from_string(spec.strategy);
  plan.r = plan.strategy == Strategy::nai
               ? 1
               : (plan.strategy == Strategy::sfa ? spec.starts : spec.batch);
  plan.seed = spec.seed;
  plan.scheme = spec.scheme == "column" ? spca::StartScheme::column
                                        : spca::StartScheme::gaussian_sphere;
  plan.validate();
  return plan;
}

SolverConfig make_config(const CampaignSpec& spec) {
  SolverConfig cfg;
  cfg.max_iterations = spec.max_iterations;
  cfg.tol = spec.tol;
  cfg.seed = spec.seed;
  if (cfg.max_iterations < 1) throw std::invalid_argument("max-iterations must be >= 1");
  if (cfg.tol <= 0.0) throw std::invalid_argument("tol must be > 0");
  return cfg;
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error(path + ": cannot open for writing");
  out << text;
}

std::string csv_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17e", v);
  return buf;
}

bool campaign_degenerate(const MultiStartReport& report) {
  for (const auto& r : report.all_results)
    if (r.status != RunStatus::degenerate) return false;
  return true;
}

nlohmann::ordered_json report_json(const CampaignSpec& spec, const Formulation& form,
                                   const DataMatrix& A, const MultiStartReport& report) {
  nlohmann::ordered_json j;
  j["formulation"] = {{"variance", spec.variance},
                      {"sparsity", spec.sparsity},
                      {"mode", spec.mode},
                      {form.mode == spca::SparsityMode::constraint ? "s" : "gamma",
                       form.param}};
  j["n"] = A.rows();
  j["p"] = A.cols();
  j["seed"] = spec.seed;
  j["tol"] = spec.tol;
  j["max_iterations"] = spec.max_iterations;
  j["starts"] = spec.starts;
  j["strategy"] = spec.strategy;
  j["batch"] = make_plan(spec).effective_width();

  const auto& best = report.best;
  nlohmann::ordered_json loading = nlohmann::ordered_json::object();
  int nnz = 0;
  for (std::size_t i = 0; i < best.loading.size(); ++i) {
    if (best.loading[i] != 0.0) {
      loading[std::to_string(i)] = best.loading[i];
      ++nnz;
    }
  }
  j["best"] = {{"start_index", best.start_index},
               {"objective", best.objective},
               {"iterations", best.iterations},
               {"status", spca::to_string(best.status)},
               {"nnz", nnz},
               {"loading", loading}};
  if (form.variance == spca::VarianceNorm::l2) {
    const double ax = spca::l2_norm(A.mult(best.loading));
    const double fro = A.frobenius_norm();
    j["explained_variance_ratio"] = fro > 0.0 ? ax * ax / (fro * fro) : 0.0;
  }
  nlohmann::ordered_json per_start = nlohmann::ordered_json::array();
  for (const auto& r : report.all_results)
    per_start.push_back({{"objective", r.objective},
                         {"iterations", r.iterations},
                         {"status", spca::to_string(r.status)}});
  j["per_start"] = per_start;
  j["total_sweeps"] = report.total_sweeps;
  j["wall_time"] = report.wall_time;
  return j;
}

int cmd_solve(const CampaignSpec& spec) {
  const DataMatrix A = load_input(spec);
  const Formulation form = make_formulation(spec, A.cols());
  const MultiStartReport report =
      spca::run_multistart(form, A, make_plan(spec), make_config(spec));
  write_text(spec.output, report_json(spec, form, A, report).dump(2) + "\n");
  return campaign_degenerate(report) ? kExitDegenerate : kExitOk;
}

std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> grid;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    grid.push_back(std::stod(tok));
  }
  if (grid.empty()) throw std::invalid_argument("empty parameter grid");
  return grid;
}

int cmd_variance_sweep(const CampaignSpec& spec, const std::string& grid_text) {
  const DataMatrix A = load_input(spec);
  const std::vector<double> grid = parse_grid(grid_text);
  std::string csv = "param,start_index,objective,best_objective,fraction_of_best\n";
  bool all_degenerate = true;
  for (double param : grid) {
    CampaignSpec point = spec;
    if (spec.mode == "constraint")
      point.s = param;
    else
      point.gamma = param;
    const Formulation form = make_formulation(point, A.cols());
    const MultiStartReport report =
        spca::run_multistart(form, A, make_plan(point), make_config(point));
    if (!campaign_degenerate(report)) all_degenerate = false;
    const double best = report.best.objective;
    for (const auto& r : report.all_results) {
      const double frac = best != 0.0 ? r.objective / best : 1.0;
      csv += csv_number(param) + "," + std::to_string(r.start_index) + "," +
             csv_number(r.objective) + "," + csv_number(best) + "," +
             csv_number(frac) + "\n";
    }
  }
  write_text(spec.output, csv);
  return all_degenerate ? kExitDegenerate : kExitOk;
}

int cmd_bench_strategies(const CampaignSpec& spec, const std::string& strategies) {
  const DataMatrix A = load_input(spec);
  const Formulation form = make_formulation(spec, A.cols());
  const SolverConfig cfg = make_config(spec);
  std::vector<std::string> names;
  {
    std::stringstream ss(strategies);
    std::string tok;
    while (std::getline(ss, tok, ','))
      if (!tok.empty()) names.push_back(tok);
  }
  if (names.empty()) throw std::invalid_argument("no strategies given");

  std::string csv = "strategy,r,total_sweeps,wall_time,speedup_vs_nai,best_objective\n";
  double nai_wall = 0.0;
  bool all_degenerate = true;
  // NAI baseline always runs first so speedups are well defined.
  std::vector<std::string> order = names;
  if (std::find(order.begin(), order.end(), std::string("nai")) == order.end())
    order.insert(order.begin(), "nai");
  std::vector<std::string> rows_done;
  for (const std::string& name : order) {
    CampaignSpec point = spec;
    point.strategy = name;
    const MultiStartPlan plan = make_plan(point);
    const MultiStartReport report = spca::run_multistart(form, A, plan, cfg);
    if (!campaign_degenerate(report)) all_degenerate = false;
    if (name == "nai") nai_wall = report.wall_time;
    const bool listed =
        std::find(names.begin(), names.end(), name) != names.end();
    if (!listed) continue;
    const auto stats = spca::sweep_stats(report, nai_wall);
    csv += name + "," + std::to_string(plan.effective_width()) + "," +
           std::to_string(report.total_sweeps) + "," + csv_number(report.wall_time) +
           "," + csv_number(stats.speedup_vs_baseline) + "," +
           csv_number(report.best.objective) + "\n";
  }
  write_text(spec.output, csv);
  return all_degenerate ? kExitDegenerate : kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sparse PCA alternating-maximization solver"};
  app.require_subcommand(1);

  CampaignSpec solve_spec, sweep_spec, bench_spec;
  std::string grid_text, strategy_list = "nai,sfa,bat,otf";

  CLI::App* solve = app.add_subcommand("solve", "run one multi-start campaign");
  add_common_flags(solve, solve_spec);

  CLI::App* sweep = app.add_subcommand(
      "variance-sweep", "run campaigns over a parameter grid, emit CSV");
  add_common_flags(sweep, sweep_spec);
  sweep->add_option("--grid", grid_text, "comma-separated s or gamma values")
      ->required();

  CLI::App* bench = app.add_subcommand(
      "bench-strategies", "compare scheduling strategies on one campaign");
  add_common_flags(bench, bench_spec);
  bench->add_option("--strategies", strategy_list, "comma-separated strategy names");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitInput;
  }

  try {
    if (solve->parsed()) return cmd_solve(solve_spec);
    if (sweep->parsed()) return cmd_variance_sweep(sweep_spec, grid_text);
    if (bench->parsed()) return cmd_bench_strategies(bench_spec, strategy_list);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitInput;
}
