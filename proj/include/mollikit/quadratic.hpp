#pragma once

#include <vector>

#include <Eigen/Dense>

#include "mollikit/estimator.hpp"

namespace mollikit {

/// Q_n(beta) = -score' beta + (a/2) beta' gram beta with
/// score = n^{-1/2} sum psi(e_i) x_i and gram = n^{-1} sum x_i x_i'.
struct QuadraticApprox {
  Eigen::VectorXd score;
  Eigen::MatrixXd gram;
  double a = 0.0;
};

/// Reparametrized objective sum_t [rho(e_t - x_t' beta / sqrt(n)) - rho(e_t)]
/// with the exact nonsmooth loss.
double tilde_L(const LinearSample& sample, const LossSpec& loss, const Eigen::VectorXd& beta);

QuadraticApprox build_quadratic(const LinearSample& sample, const LossSpec& loss, double a);
double q_value(const QuadraticApprox& q, const Eigen::VectorXd& beta);
/// Unique minimizer (a gram)^{-1} score; throws SingularGram when the
/// smallest eigenvalue of gram is not positive.
Eigen::VectorXd beta_Q(const QuadraticApprox& q);

/// Plug-in curvature (1/n) sum rho_m''(e_i).
double plugin_curvature(const LinearSample& sample, const SmoothedLoss& smoothed);

/// Deterministic probes in the ball ||beta|| <= radius: beta = 0 first,
/// then low-discrepancy directions times a radial grid.
std::vector<Eigen::VectorXd> ball_probes(Eigen::Index d, double radius, int count);

/// max over ball_probes of |tilde_L(beta) - Q_n(beta)|.
double approximation_gap(const LinearSample& sample, const LossSpec& loss, double a, double radius, int probes = 512);

struct MinimizerComparison {
  Eigen::VectorXd beta_m;  // sqrt(n) (theta_m - theta0)
  Eigen::VectorXd beta_q;
  double gap = 0.0;        // ||beta_m - beta_q||
  FitResult fit;
};

MinimizerComparison compare_minimizers(const LinearSample& sample, const SmoothedLoss& smoothed, double a,
                                       const SolverOptions& opts = {});
/// ||sqrt(n)(theta_m - theta0) - beta_Q||.
double minimizer_gap(const LinearSample& sample, const LossSpec& loss, const MollifierKernel& kernel, double m,
                     double a, const SolverOptions& opts = {});

/// n^{-1/4} log(log(n)); requires n >= 16.
double loglog_scale(double n);

}  // namespace mollikit
