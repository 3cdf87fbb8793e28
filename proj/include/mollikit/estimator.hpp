#pragma once

#include <optional>

#include <Eigen/Dense>

#include "mollikit/kernels.hpp"
#include "mollikit/losses.hpp"
#include "mollikit/mollify.hpp"

namespace mollikit {

/// Observations of y = x' theta0 + e. The errors and the true parameter
/// are optional and only present for simulated data.
struct LinearSample {
  Eigen::MatrixXd x;  // n x d
  Eigen::VectorXd y;  // n
  std::optional<Eigen::VectorXd> e;
  std::optional<Eigen::VectorXd> theta0;

  Eigen::Index n() const { return x.rows(); }
  Eigen::Index d() const { return x.cols(); }

  /// Builds y = x theta0 + e and keeps e and theta0.
  static LinearSample simulated(Eigen::MatrixXd x, Eigen::VectorXd theta0, Eigen::VectorXd e);
  /// Throws InvalidArgument on shape mismatch.
  void validate() const;
};

struct SolverOptions {
  int max_iter = 200;
  /// Converged when the gradient inf-norm is below grad_tol * n.
  double grad_tol = 1e-9;
  double ridge = 1e-10;
};

struct FitResult {
  Eigen::VectorXd theta_hat;
  double objective = 0.0;
  int iterations = 0;
  bool converged = false;
  double gradient_norm = 0.0;
};

/// Minimizes sum_t rho_m(y_t - x_t' theta) by damped Newton with Armijo
/// backtracking, starting from least squares.
FitResult fit_smoothed(const LinearSample& sample, const SmoothedLoss& smoothed, const SolverOptions& opts = {});
FitResult fit_smoothed(const LinearSample& sample, const LossSpec& loss, const MollifierKernel& kernel, double m,
                       const SolverOptions& opts = {});

/// Exact minimizer of sum_i rho_tau(y_i - x_i theta) for scalar theta by a
/// breakpoint scan; returns the left end of the minimizing interval.
double fit_exact_scalar_quantile(const LinearSample& sample, double tau);

/// Convolution-smoothed quantile regression with bandwidth h: the check
/// loss smoothed by the Gaussian kernel at scale m = 1/h.
FitResult fit_convolution_baseline(const LinearSample& sample, double tau, double h, const SolverOptions& opts = {});

/// Least-squares solution; throws SingularDesign when x lacks full column rank.
Eigen::VectorXd least_squares(const LinearSample& sample);

}  // namespace mollikit
