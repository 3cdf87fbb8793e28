// mollikit command-line front end.
//
//   mollikit curve    --loss relu --kernel gaussian --m 2,5 --grid -2:2:0.5 --out f.csv
//   mollikit rate     --loss abs --kernel bump --m 10,20 --out rate.csv
//   mollikit simulate --config exp.json --out results.json [--table table.csv]
//   mollikit mad      --config exp.json --out results.json [--table table.csv]
//   mollikit diagnose --n 100,400,1600 --reps 200 --out gaps.csv
//
// Exit codes: 0 success, 2 usage/config error, 3 experiment-quality failure.

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "mollikit/error.hpp"
#include "mollikit/experiment_io.hpp"
#include "mollikit/mollify.hpp"
#include "mollikit/montecarlo.hpp"

namespace {

using namespace mollikit;

constexpr int kUsage = 2;
constexpr int kQuality = 3;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw UsageError("cannot write '" + path + "'");
  return out;
}

std::uint64_t seed_override(std::uint64_t fallback) {
  if (const char* env = std::getenv("MOLLIKIT_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw UsageError(fmt::format("MOLLIKIT_SEED must be an unsigned integer, got '{}'", env));
    }
  }
  return fallback;
}

struct CurveArgs {
  std::string loss;
  std::string kernel = "bump";
  std::vector<double> m;
  std::string grid;
  std::string out;
};

void cmd_curve(const CurveArgs& args, int threads) {
  if (args.m.empty()) throw UsageError("--m needs at least one scale");
  const LossSpec loss = LossSpec::parse(args.loss);
  const MollifierKernel kernel = MollifierKernel::parse(args.kernel);
  const std::vector<double> grid = parse_grid(args.grid);
  std::vector<std::vector<double>> columns;
  for (double m : args.m) columns.push_back(smooth_values(SmoothedLoss(loss, kernel, m), grid, threads));

  auto out = open_out(args.out);
  out << "u,rho";
  for (double m : args.m) out << fmt::format(",rho_{}", m);
  out << "\n";
  for (std::size_t i = 0; i < grid.size(); ++i) {
    out << io::format_double(grid[i]) << "," << io::format_double(loss.value(grid[i]));
    for (const auto& col : columns) out << "," << io::format_double(col[i]);
    out << "\n";
  }
}

void cmd_rate(const CurveArgs& args, int threads) {
  if (args.m.empty()) throw UsageError("--m needs at least one scale");
  const LossSpec loss = LossSpec::parse(args.loss);
  const MollifierKernel kernel = MollifierKernel::parse(args.kernel);
  const std::vector<double> grid = parse_grid(args.grid.empty() ? "-3:3:0.001" : args.grid);
  auto out = open_out(args.out);
  out << "m,sup_error\n";
  for (double m : args.m) {
    out << io::format_double(m) << "," << io::format_double(sup_error(SmoothedLoss(loss, kernel, m), grid, threads))
        << "\n";
  }
}

struct ExperimentArgs {
  std::string config;
  std::string out;
  std::string table;
  int max_iter = 0;
  double grad_tol = 0.0;
  double ridge = -1.0;
};

void cmd_experiment(const ExperimentArgs& args, int threads, bool mad) {
  io::ExperimentPlan plan = io::load_plan(args.config);
  plan.base.base_seed = seed_override(plan.base.base_seed);
  plan.base.threads = threads;
  if (args.max_iter > 0) plan.base.solver.max_iter = args.max_iter;
  if (args.grad_tol > 0.0) plan.base.solver.grad_tol = args.grad_tol;
  if (args.ridge >= 0.0) plan.base.solver.ridge = args.ridge;

  std::vector<ExperimentResult> results;
  for (const auto& cell : plan.cells()) {
    results.push_back(mad ? run_mad_experiment(cell) : run_rmse_experiment(cell));
  }
  open_out(args.out) << io::results_document(plan, results, utc_timestamp()).dump(2) << "\n";
  const std::string table =
      args.table.empty() ? std::filesystem::path(args.out).replace_extension(".csv").string() : args.table;
  open_out(table) << io::results_table_csv(results);
}

struct DiagnoseArgs {
  std::vector<int> n = {100, 400, 1600, 6400};
  int reps = 200;
  double tau = 0.5;
  std::string dist = "Normal01";
  double radius = 2.0;
  int probes = 512;
  double m = 5.0;
  std::string kernel = "bump";
  std::uint64_t seed = 20240917;
  std::string out;
};

void cmd_diagnose(const DiagnoseArgs& args, int threads) {
  if (args.n.empty()) throw UsageError("--n needs at least one sample size");
  GapStudyConfig cfg;
  cfg.n_list = args.n;
  cfg.replications = args.reps;
  cfg.tau = args.tau;
  cfg.error_dist = parse_error_dist(args.dist);
  cfg.radius = args.radius;
  cfg.probes = args.probes;
  cfg.m = args.m;
  cfg.kernel = MollifierKernel::parse(args.kernel).kind();
  cfg.base_seed = seed_override(args.seed);
  cfg.threads = threads;
  for (int n : cfg.n_list) {
    if (n < 16) throw UsageError("--n entries must be >= 16");
  }
  const auto rows = run_gap_study(cfg);
  auto out = open_out(args.out);
  out << "n,median_sup_gap,median_pointwise_gap,mean_minimizer_gap,scaled_minimizer_gap\n";
  for (const auto& r : rows) {
    out << r.n << "," << io::format_double(r.median_sup_gap) << "," << io::format_double(r.median_pointwise_gap)
        << "," << io::format_double(r.mean_minimizer_gap) << "," << io::format_double(r.scaled_minimizer_gap) << "\n";
  }
  if (rows.size() >= 2) {
    std::vector<double> ns, gaps;
    for (const auto& r : rows) {
      ns.push_back(r.n);
      gaps.push_back(r.median_sup_gap);
    }
    std::cout << fmt::format("log-log slope of median sup gap: {:.4f}\n", loglog_slope(ns, gaps));
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mollifier smoothing of nonsmooth losses: curves, rates and Monte Carlo experiments"};
  app.require_subcommand(1, 1);
  app.fallthrough();
  int threads = 0;
  app.add_option("--threads", threads, "Cap on parallel workers (0 = all cores)")->check(CLI::NonNegativeNumber);

  CurveArgs curve;
  auto* curve_cmd = app.add_subcommand("curve", "Emit rho and rho_m on a grid as CSV");
  curve_cmd->add_option("--loss", curve.loss, "abs | check:tau | huber:c | relu")->required();
  curve_cmd->add_option("--kernel", curve.kernel, "gaussian | bump");
  curve_cmd->add_option("--m", curve.m, "Comma-separated scales")->delimiter(',')->required();
  curve_cmd->add_option("--grid", curve.grid, "lo:hi:step")->required();
  curve_cmd->add_option("--out", curve.out, "Output CSV")->required();

  CurveArgs rate;
  auto* rate_cmd = app.add_subcommand("rate", "Emit sup |rho_m - rho| per m as CSV");
  rate_cmd->add_option("--loss", rate.loss, "abs | check:tau | huber:c | relu")->required();
  rate_cmd->add_option("--kernel", rate.kernel, "gaussian | bump");
  rate_cmd->add_option("--m", rate.m, "Comma-separated scales")->delimiter(',')->required();
  rate_cmd->add_option("--grid", rate.grid, "lo:hi:step (default -3:3:0.001)");
  rate_cmd->add_option("--out", rate.out, "Output CSV")->required();

  ExperimentArgs simulate;
  ExperimentArgs mad;
  auto add_experiment = [&](const char* name, const char* help, ExperimentArgs& args) {
    auto* cmd = app.add_subcommand(name, help);
    cmd->add_option("--config", args.config, "Experiment JSON")->required();
    cmd->add_option("--out", args.out, "Results JSON")->required();
    cmd->add_option("--table", args.table, "Table CSV (default: results path with .csv)");
    cmd->add_option("--max-iter", args.max_iter, "Newton iteration cap");
    cmd->add_option("--grad-tol", args.grad_tol, "Gradient tolerance per observation");
    cmd->add_option("--ridge", args.ridge, "Hessian ridge");
    return cmd;
  };
  auto* simulate_cmd = add_experiment("simulate", "RMSE experiment (exact, mollified and convolution fits)", simulate);
  auto* mad_cmd = add_experiment("mad", "MAD experiment between beta_m and beta_Q", mad);

  DiagnoseArgs diag;
  auto* diag_cmd = app.add_subcommand("diagnose", "Quadratic-approximation gap diagnostics across n");
  diag_cmd->add_option("--n", diag.n, "Comma-separated sample sizes")->delimiter(',');
  diag_cmd->add_option("--reps", diag.reps, "Replications per n")->check(CLI::PositiveNumber);
  diag_cmd->add_option("--tau", diag.tau, "Quantile level");
  diag_cmd->add_option("--dist", diag.dist, "Normal01 | StudentT4");
  diag_cmd->add_option("--radius", diag.radius, "Ball radius for the sup gap");
  diag_cmd->add_option("--probes", diag.probes, "Probe count in the ball");
  diag_cmd->add_option("--m", diag.m, "Scale for the minimizer gap (0 skips it)");
  diag_cmd->add_option("--kernel", diag.kernel, "gaussian | bump");
  diag_cmd->add_option("--seed", diag.seed, "Base seed");
  diag_cmd->add_option("--out", diag.out, "Output CSV")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (curve_cmd->parsed()) cmd_curve(curve, threads);
    if (rate_cmd->parsed()) cmd_rate(rate, threads);
    if (simulate_cmd->parsed()) cmd_experiment(simulate, threads, false);
    if (mad_cmd->parsed()) cmd_experiment(mad, threads, true);
    if (diag_cmd->parsed()) cmd_diagnose(diag, threads);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.code() == ErrorCode::ExperimentQuality ? kQuality : kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
