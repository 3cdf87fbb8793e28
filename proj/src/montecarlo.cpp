#include "mollikit/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <fmt/format.h>

#include "mollikit/error.hpp"
#include "mollikit/parallel.hpp"
#include "mollikit/quadratic.hpp"
#include "mollikit/rng.hpp"
#include "mollikit/special.hpp"

namespace mollikit {

std::string to_string(ErrorDist dist) { return dist == ErrorDist::Normal01 ? "Normal01" : "StudentT4"; }

ErrorDist parse_error_dist(const std::string& text) {
  if (text == "Normal01" || text == "normal") return ErrorDist::Normal01;
  if (text == "StudentT4" || text == "t4") return ErrorDist::StudentT4;
  throw Error(ErrorCode::Config, "unknown error_dist '" + text + "' (expected Normal01|StudentT4)");
}

void ExperimentConfig::validate() const {
  if (n < 10) throw Error(ErrorCode::Config, fmt::format("n must be >= 10, got {}", n));
  if (M < 1) throw Error(ErrorCode::Config, fmt::format("M must be >= 1, got {}", M));
  if (!(tau > 0.0 && tau < 1.0)) throw Error(ErrorCode::Config, fmt::format("tau must lie in (0,1), got {}", tau));
  for (double m : m_list) {
    if (!(m > 0.0)) throw Error(ErrorCode::Config, fmt::format("m_list entries must be > 0, got {}", m));
  }
  for (double h : h_list) {
    if (!(h > 0.0 && h < 1.0)) throw Error(ErrorCode::Config, fmt::format("h_list entries must lie in (0,1), got {}", h));
  }
}

double error_quantile_shift(ErrorDist dist, double tau) {
  if (!(tau > 0.0 && tau < 1.0)) throw Error(ErrorCode::Domain, fmt::format("tau must lie in (0,1), got {}", tau));
  return dist == ErrorDist::Normal01 ? special::normal_quantile(tau) : special::student_t4_quantile(tau);
}

ErrorDensity error_density(ErrorDist dist, double tau) {
  const ErrorDensity base = dist == ErrorDist::Normal01 ? ErrorDensity::standard_normal() : ErrorDensity::student_t4();
  return base.shifted(error_quantile_shift(dist, tau));
}

double error_density_at_zero(ErrorDist dist, double tau) {
  const double q = error_quantile_shift(dist, tau);
  return dist == ErrorDist::Normal01 ? special::normal_pdf(q) : special::student_t4_pdf(q);
}

LinearSample generate_sample(const ExperimentConfig& config, std::size_t replication) {
  RandomStream rng(stream_seed(config.base_seed, replication));
  const double shift = error_quantile_shift(config.error_dist, config.tau);
  const auto n = static_cast<Eigen::Index>(config.n);
  Eigen::MatrixXd x(n, 1);
  Eigen::VectorXd e(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    x(i, 0) = 1.0 + rng.normal();
    const double eps = config.error_dist == ErrorDist::Normal01 ? rng.normal() : rng.student_t4();
    e[i] = config.zero_errors ? 0.0 : eps - shift;
  }
  return LinearSample::simulated(std::move(x), Eigen::VectorXd::Constant(1, 1.0), std::move(e));
}

namespace {

constexpr double kTheta0 = 1.0;

void enforce_quality(const ExperimentResult& result) {
  if (static_cast<double>(result.excluded) > 0.01 * static_cast<double>(result.config.M)) {
    throw Error(ErrorCode::ExperimentQuality,
                fmt::format("{} of {} replications failed (limit 1%)", result.excluded, result.config.M));
  }
}

double rms(const std::vector<ReplicationRecord>& records, auto&& pick) {
  double sum = 0.0;
  std::size_t count = 0;
  for (const auto& r : records) {
    if (!r.included) continue;
    const double dev = pick(r) - kTheta0;
    sum += dev * dev;
    ++count;
  }
  return count ? std::sqrt(sum / static_cast<double>(count)) : 0.0;
}

template <class Body>
ExperimentResult run_replications(const ExperimentConfig& config, Body&& body) {
  config.validate();
  ExperimentResult result;
  result.config = config;
  result.records.resize(static_cast<std::size_t>(config.M));
  parallel::for_each_index(result.records.size(), config.threads, [&](std::size_t j) {
    ReplicationRecord& rec = result.records[j];
    rec.replication = j;
    rec.seed = stream_seed(config.base_seed, j);
    try {
      body(generate_sample(config, j), rec);
    } catch (const Error& err) {
      rec.included = false;
      rec.failure = err.what();
    }
  });
  for (const auto& rec : result.records) result.excluded += rec.included ? 0 : 1;
  return result;
}

}  // namespace

ExperimentResult run_rmse_experiment(const ExperimentConfig& config) {
  const LossSpec loss = LossSpec::check(config.tau);
  const MollifierKernel kernel =
      config.kernel == KernelKind::CompactBump ? MollifierKernel::bump() : MollifierKernel::gaussian();
  std::vector<SmoothedLoss> smoothed;
  for (double m : config.m_list) smoothed.emplace_back(loss, kernel, m);

  ExperimentResult result = run_replications(config, [&](const LinearSample& sample, ReplicationRecord& rec) {
    rec.theta_tau = fit_exact_scalar_quantile(sample, config.tau);
    for (const auto& s : smoothed) {
      const FitResult fit = fit_smoothed(sample, s, config.solver);
      if (!fit.converged) throw Error(ErrorCode::ExperimentQuality, fmt::format("no convergence at m = {}", s.m()));
      rec.theta_m.push_back(fit.theta_hat[0]);
    }
    for (double h : config.h_list) {
      const FitResult fit = fit_convolution_baseline(sample, config.tau, h, config.solver);
      if (!fit.converged) throw Error(ErrorCode::ExperimentQuality, fmt::format("no convergence at h = {}", h));
      rec.theta_h.push_back(fit.theta_hat[0]);
    }
  });

  result.rmse_tau = rms(result.records, [](const ReplicationRecord& r) { return r.theta_tau; });
  for (std::size_t k = 0; k < config.m_list.size(); ++k) {
    result.rmse_m[config.m_list[k]] = rms(result.records, [k](const ReplicationRecord& r) { return r.theta_m[k]; });
  }
  for (std::size_t k = 0; k < config.h_list.size(); ++k) {
    result.rmse_h[config.h_list[k]] = rms(result.records, [k](const ReplicationRecord& r) { return r.theta_h[k]; });
  }
  result.kind = ExperimentKind::Rmse;
  enforce_quality(result);
  return result;
}

ExperimentResult run_mad_experiment(const ExperimentConfig& config) {
  const LossSpec loss = LossSpec::check(config.tau);
  const MollifierKernel kernel =
      config.kernel == KernelKind::CompactBump ? MollifierKernel::bump() : MollifierKernel::gaussian();
  const double a = error_density_at_zero(config.error_dist, config.tau);
  std::vector<SmoothedLoss> smoothed;
  for (double m : config.m_list) smoothed.emplace_back(loss, kernel, m);

  ExperimentResult result = run_replications(config, [&](const LinearSample& sample, ReplicationRecord& rec) {
    for (const auto& s : smoothed) {
      const MinimizerComparison cmp = compare_minimizers(sample, s, a, config.solver);
      if (!cmp.fit.converged) throw Error(ErrorCode::ExperimentQuality, fmt::format("no convergence at m = {}", s.m()));
      rec.theta_m.push_back(cmp.fit.theta_hat[0]);
      rec.beta_m.push_back(cmp.beta_m[0]);
      rec.beta_q = cmp.beta_q[0];
    }
  });

  for (std::size_t k = 0; k < config.m_list.size(); ++k) {
    double sum = 0.0;
    std::size_t count = 0;
    for (const auto& r : result.records) {
      if (!r.included) continue;
      sum += std::abs(r.beta_m[k] - r.beta_q);
      ++count;
    }
    result.mad_m[config.m_list[k]] = count ? sum / static_cast<double>(count) : 0.0;
    result.rmse_m[config.m_list[k]] =
        rms(result.records, [k](const ReplicationRecord& r) { return r.theta_m[k]; });
  }
  result.kind = ExperimentKind::Mad;
  enforce_quality(result);
  return result;
}

namespace {

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  const auto mid = v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2);
  std::nth_element(v.begin(), mid, v.end());
  if (v.size() % 2 == 1) return *mid;
  const double upper = *mid;
  const double lower = *std::max_element(v.begin(), mid);
  return 0.5 * (lower + upper);
}

}  // namespace

std::vector<GapStudyRow> run_gap_study(const GapStudyConfig& config) {
  const LossSpec loss = LossSpec::check(config.tau);
  const double a = error_density_at_zero(config.error_dist, config.tau);
  const MollifierKernel kernel =
      config.kernel == KernelKind::CompactBump ? MollifierKernel::bump() : MollifierKernel::gaussian();
  std::vector<GapStudyRow> rows;
  for (int n : config.n_list) {
    ExperimentConfig design;
    design.n = n;
    design.M = config.replications;
    design.tau = config.tau;
    design.error_dist = config.error_dist;
    design.base_seed = mix64(config.base_seed ^ static_cast<std::uint64_t>(n));
    design.validate();

    const auto reps = static_cast<std::size_t>(config.replications);
    std::vector<double> sup_gap(reps), point_gap(reps), min_gap(reps);
    parallel::for_each_index(reps, config.threads, [&](std::size_t j) {
      const LinearSample sample = generate_sample(design, j);
      const QuadraticApprox q = build_quadratic(sample, loss, a);
      const Eigen::VectorXd one = Eigen::VectorXd::Ones(sample.d());
      sup_gap[j] = approximation_gap(sample, loss, a, config.radius, config.probes);
      point_gap[j] = std::abs(tilde_L(sample, loss, one) - q_value(q, one));
      if (config.m > 0.0) min_gap[j] = compare_minimizers(sample, SmoothedLoss(loss, kernel, config.m), a).gap;
    });

    GapStudyRow row;
    row.n = n;
    row.median_sup_gap = median(sup_gap);
    row.median_pointwise_gap = median(point_gap);
    row.mean_minimizer_gap = std::accumulate(min_gap.begin(), min_gap.end(), 0.0) / static_cast<double>(reps);
    row.scaled_minimizer_gap = row.mean_minimizer_gap / loglog_scale(n);
    rows.push_back(row);
  }
  return rows;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw Error(ErrorCode::InvalidArgument, "loglog_slope needs >= 2 pairs");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= static_cast<double>(x.size());
  my /= static_cast<double>(x.size());
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = std::log(x[i]) - mx;
    sxy += dx * (std::log(y[i]) - my);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

double beta_q_sample_variance(int n, int replications, double tau, ErrorDist dist, std::uint64_t base_seed,
                              int threads) {
  ExperimentConfig design;
  design.n = n;
  design.M = replications;
  design.tau = tau;
  design.error_dist = dist;
  design.base_seed = base_seed;
  design.validate();
  if (replications < 2) throw Error(ErrorCode::InvalidArgument, "variance needs at least 2 replications");
  const LossSpec loss = LossSpec::check(tau);
  const double a = error_density_at_zero(dist, tau);
  std::vector<double> beta(static_cast<std::size_t>(replications));
  parallel::for_each_index(beta.size(), threads, [&](std::size_t j) {
    beta[j] = beta_Q(build_quadratic(generate_sample(design, j), loss, a))[0];
  });
  const double mean = std::accumulate(beta.begin(), beta.end(), 0.0) / static_cast<double>(beta.size());
  double ss = 0.0;
  for (double b : beta) ss += (b - mean) * (b - mean);
  return ss / static_cast<double>(beta.size() - 1);
}

}  // namespace mollikit
