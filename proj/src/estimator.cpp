#include "mollikit/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include <fmt/format.h>

#include "mollikit/error.hpp"

namespace mollikit {

LinearSample LinearSample::simulated(Eigen::MatrixXd x, Eigen::VectorXd theta0, Eigen::VectorXd e) {
  LinearSample s;
  s.y = x * theta0 + e;
  s.x = std::move(x);
  s.e = std::move(e);
  s.theta0 = std::move(theta0);
  s.validate();
  return s;
}

void LinearSample::validate() const {
  if (x.rows() < 1 || x.cols() < 1 || x.rows() < x.cols()) {
    throw Error(ErrorCode::InvalidArgument, fmt::format("sample needs n >= d >= 1, got n={} d={}", x.rows(), x.cols()));
  }
  if (y.size() != x.rows()) throw Error(ErrorCode::InvalidArgument, "y length does not match x rows");
  if (e && e->size() != x.rows()) throw Error(ErrorCode::InvalidArgument, "e length does not match x rows");
  if (theta0 && theta0->size() != x.cols()) throw Error(ErrorCode::InvalidArgument, "theta0 length does not match d");
}

Eigen::VectorXd least_squares(const LinearSample& sample) {
  sample.validate();
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(sample.x);
  if (qr.rank() < sample.d()) {
    throw Error(ErrorCode::SingularDesign, "singular design: x does not have full column rank");
  }
  return qr.solve(sample.y);
}

namespace {

struct Local {
  double objective = 0.0;
  Eigen::VectorXd gradient;
  Eigen::MatrixXd hessian;
};

double objective_at(const LinearSample& sample, const SmoothedLoss& s, const Eigen::VectorXd& theta) {
  const Eigen::VectorXd r = sample.y - sample.x * theta;
  double total = 0.0;
  for (Eigen::Index t = 0; t < r.size(); ++t) total += s.value(r[t]);
  return total;
}

Local local_model(const LinearSample& sample, const SmoothedLoss& s, const Eigen::VectorXd& theta, double ridge) {
  const Eigen::Index d = sample.d();
  Local out;
  out.gradient = Eigen::VectorXd::Zero(d);
  out.hessian = ridge * Eigen::MatrixXd::Identity(d, d);
  const Eigen::VectorXd r = sample.y - sample.x * theta;
  for (Eigen::Index t = 0; t < r.size(); ++t) {
    const SmoothedValues v = s.evaluate(r[t]);
    const auto xt = sample.x.row(t).transpose();
    out.objective += v.value;
    out.gradient.noalias() -= v.first * xt;
    out.hessian.noalias() += v.second * xt * xt.transpose();
  }
  return out;
}

}  // namespace

FitResult fit_smoothed(const LinearSample& sample, const SmoothedLoss& smoothed, const SolverOptions& opts) {
  if (!smoothed.loss().coercive()) {
    throw Error(ErrorCode::NonCoerciveLoss, "non-coercive loss: " + smoothed.loss().to_string() + " has no unique minimum");
  }
  FitResult result;
  result.theta_hat = least_squares(sample);
  const double tol = opts.grad_tol * static_cast<double>(sample.n());
  constexpr double kArmijo = 1e-4;
  constexpr int kMaxHalvings = 60;

  Local model = local_model(sample, smoothed, result.theta_hat, opts.ridge);
  for (result.iterations = 0; result.iterations < opts.max_iter; ++result.iterations) {
    result.gradient_norm = model.gradient.lpNorm<Eigen::Infinity>();
    if (result.gradient_norm < tol) {
      result.converged = true;
      break;
    }
    Eigen::LDLT<Eigen::MatrixXd> ldlt(model.hessian);
    Eigen::VectorXd step = -ldlt.solve(model.gradient);
    double slope = model.gradient.dot(step);
    if (ldlt.info() != Eigen::Success || !step.allFinite() || !(slope < 0.0)) {
      step = -model.gradient;
      slope = -model.gradient.squaredNorm();
    }
    // Near the optimum the predicted decrease falls below the rounding
    // resolution of the objective; allow that much slack.
    const double slack = 16.0 * std::numeric_limits<double>::epsilon() * (1.0 + std::abs(model.objective));
    double t = 1.0;
    bool accepted = false;
    for (int h = 0; h < kMaxHalvings; ++h, t *= 0.5) {
      const Eigen::VectorXd trial = result.theta_hat + t * step;
      if (objective_at(sample, smoothed, trial) <= model.objective + kArmijo * t * slope + slack) {
        result.theta_hat = trial;
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
    model = local_model(sample, smoothed, result.theta_hat, opts.ridge);
  }
  result.objective = model.objective;
  result.gradient_norm = model.gradient.lpNorm<Eigen::Infinity>();
  if (result.gradient_norm < tol) result.converged = true;
  return result;
}

FitResult fit_smoothed(const LinearSample& sample, const LossSpec& loss, const MollifierKernel& kernel, double m,
                       const SolverOptions& opts) {
  return fit_smoothed(sample, SmoothedLoss(loss, kernel, m), opts);
}

double fit_exact_scalar_quantile(const LinearSample& sample, double tau) {
  sample.validate();
  if (sample.d() != 1) {
    throw Error(ErrorCode::UnsupportedDimension,
                fmt::format("exact quantile oracle supports d = 1 only, got d = {}", sample.d()));
  }
  if (!(tau > 0.0 && tau < 1.0)) throw Error(ErrorCode::InvalidArgument, "tau must lie in (0,1)");
  const Eigen::Index n = sample.n();
  std::vector<double> breakpoint(static_cast<std::size_t>(n));
  std::vector<double> weight(static_cast<std::size_t>(n));
  // Right derivative below every breakpoint; crossing breakpoint i adds |x_i|.
  double slope = 0.0;
  double total = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double xi = sample.x(i, 0);
    if (xi == 0.0) throw Error(ErrorCode::DegenerateRegressor, fmt::format("degenerate regressor: x[{}] = 0", i));
    breakpoint[static_cast<std::size_t>(i)] = sample.y[i] / xi;
    weight[static_cast<std::size_t>(i)] = std::abs(xi);
    total += std::abs(xi);
    slope -= xi > 0.0 ? xi * tau : -xi * (1.0 - tau);
  }
  std::vector<std::size_t> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return breakpoint[a] < breakpoint[b]; });
  // Rounding in the running sum must not push a zero slope past a tie.
  const double zero = -1e-12 * total;
  for (std::size_t k = 0; k < order.size();) {
    const double b = breakpoint[order[k]];
    while (k < order.size() && breakpoint[order[k]] == b) slope += weight[order[k++]];
    if (slope >= zero) return b;
  }
  return breakpoint[order.back()];
}

FitResult fit_convolution_baseline(const LinearSample& sample, double tau, double h, const SolverOptions& opts) {
  if (!(h > 0.0 && h < 1.0)) throw Error(ErrorCode::InvalidBandwidth, fmt::format("invalid bandwidth h = {}", h));
  return fit_smoothed(sample, LossSpec::check(tau), MollifierKernel::gaussian(), 1.0 / h, opts);
}

}  // namespace mollikit
