#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "mollikit/density.hpp"
#include "mollikit/estimator.hpp"
#include "mollikit/kernels.hpp"

namespace mollikit {

enum class ErrorDist { Normal01, StudentT4 };

std::string to_string(ErrorDist dist);
/// Accepts "Normal01"/"normal" and "StudentT4"/"t4".
ErrorDist parse_error_dist(const std::string& text);

/// Simulation design y_i = x_i theta0 + e_i, x_i ~ N(1,1), theta0 = 1,
/// e_i = eps_i - F_eps^{-1}(tau).
struct ExperimentConfig {
  int n = 100;
  int M = 1000;
  double tau = 0.5;
  ErrorDist error_dist = ErrorDist::Normal01;
  std::vector<double> m_list = {5.0, 10.0, 15.0};
  std::vector<double> h_list = {0.1, 0.5, 0.9};
  std::uint64_t base_seed = 20240917;
  KernelKind kernel = KernelKind::CompactBump;
  SolverOptions solver;
  /// Worker cap for the replication loop; 0 = all cores, 1 = serial reference.
  int threads = 0;
  /// Test hook: force e = 0 so every estimator recovers theta0.
  bool zero_errors = false;

  void validate() const;
};

/// F_eps^{-1}(tau).
double error_quantile_shift(ErrorDist dist, double tau);
/// Density of e = eps - F_eps^{-1}(tau).
ErrorDensity error_density(ErrorDist dist, double tau);
/// f_e(0) = f_eps(F_eps^{-1}(tau)).
double error_density_at_zero(ErrorDist dist, double tau);

/// Bitwise reproducible from (config, replication).
LinearSample generate_sample(const ExperimentConfig& config, std::size_t replication);

struct ReplicationRecord {
  std::size_t replication = 0;
  std::uint64_t seed = 0;
  bool included = true;
  std::string failure;
  double theta_tau = 0.0;
  std::vector<double> theta_m;  // aligned with m_list
  std::vector<double> theta_h;  // aligned with h_list
  std::vector<double> beta_m;   // MAD experiment only
  double beta_q = 0.0;          // MAD experiment only
};

enum class ExperimentKind { Rmse, Mad };

struct ExperimentResult {
  ExperimentKind kind = ExperimentKind::Rmse;
  ExperimentConfig config;
  double rmse_tau = 0.0;
  std::map<double, double> rmse_m;
  std::map<double, double> rmse_h;
  std::map<double, double> mad_m;
  std::size_t excluded = 0;
  std::vector<ReplicationRecord> records;
};

/// RMSE of the exact quantile fit, the mollified fits (one per m) and the
/// convolution-smoothed fits (one per h) against theta0 = 1.
ExperimentResult run_rmse_experiment(const ExperimentConfig& config);

/// MAD_m = mean |beta_m - beta_Q| with beta_m = sqrt(n)(theta_m - theta0)
/// and a = f_e(0).
ExperimentResult run_mad_experiment(const ExperimentConfig& config);

/// Per-n summary of the quadratic-approximation diagnostics.
struct GapStudyRow {
  int n = 0;
  double median_sup_gap = 0.0;        // median over replications of approximation_gap
  double median_pointwise_gap = 0.0;  // median |tilde_L - Q_n| at beta = 1 (first coordinate)
  double mean_minimizer_gap = 0.0;    // mean ||beta_m - beta_Q||
  double scaled_minimizer_gap = 0.0;  // mean_minimizer_gap / (n^{-1/4} loglog n)
};

struct GapStudyConfig {
  std::vector<int> n_list = {100, 400, 1600, 6400};
  int replications = 200;
  double tau = 0.5;
  ErrorDist error_dist = ErrorDist::Normal01;
  double radius = 2.0;
  int probes = 512;
  /// 0 skips the minimizer-gap column.
  double m = 0.0;
  KernelKind kernel = KernelKind::CompactBump;
  std::uint64_t base_seed = 20240917;
  int threads = 0;
};

/// Runs the check-loss diagnostics with a = f_e(0) analytic.
std::vector<GapStudyRow> run_gap_study(const GapStudyConfig& config);

/// Least-squares slope of log(y) against log(x).
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

/// Sample variance of beta_Q (d = 1, check loss, a = f_e(0)) over
/// `replications` simulated datasets of size n.
double beta_q_sample_variance(int n, int replications, double tau, ErrorDist dist, std::uint64_t base_seed,
                              int threads = 0);

}  // namespace mollikit
