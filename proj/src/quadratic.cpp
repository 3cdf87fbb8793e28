#include "mollikit/quadratic.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "mollikit/error.hpp"
#include "mollikit/special.hpp"

namespace mollikit {

namespace {

void require_truth(const LinearSample& sample) {
  sample.validate();
  if (!sample.e || !sample.theta0) {
    throw Error(ErrorCode::IncompleteSample, "incomplete sample: true errors and theta0 are required");
  }
}

// Radical inverse in the given base (van der Corput).
double radical_inverse(unsigned index, unsigned base) {
  double inv = 1.0 / base;
  double f = inv;
  double r = 0.0;
  while (index > 0) {
    r += f * static_cast<double>(index % base);
    index /= base;
    f *= inv;
  }
  return r;
}

constexpr unsigned kPrimes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53};

}  // namespace

double tilde_L(const LinearSample& sample, const LossSpec& loss, const Eigen::VectorXd& beta) {
  require_truth(sample);
  const Eigen::VectorXd& e = *sample.e;
  const Eigen::VectorXd shift = sample.x * beta / std::sqrt(static_cast<double>(sample.n()));
  double total = 0.0;
  for (Eigen::Index t = 0; t < e.size(); ++t) total += loss.value(e[t] - shift[t]) - loss.value(e[t]);
  return total;
}

QuadraticApprox build_quadratic(const LinearSample& sample, const LossSpec& loss, double a) {
  if (!(a > 0.0) || !std::isfinite(a)) {
    throw Error(ErrorCode::InvalidCurvature, fmt::format("invalid curvature a = {} (must be > 0)", a));
  }
  sample.validate();
  if (!sample.e) throw Error(ErrorCode::IncompleteSample, "incomplete sample: true errors are required");
  const double n = static_cast<double>(sample.n());
  Eigen::VectorXd psi(sample.n());
  for (Eigen::Index i = 0; i < sample.n(); ++i) psi[i] = loss.subgradient((*sample.e)[i]);
  QuadraticApprox q;
  q.score = sample.x.transpose() * psi / std::sqrt(n);
  q.gram = sample.x.transpose() * sample.x / n;
  q.a = a;
  return q;
}

double q_value(const QuadraticApprox& q, const Eigen::VectorXd& beta) {
  return -q.score.dot(beta) + 0.5 * q.a * beta.dot(q.gram * beta);
}

Eigen::VectorXd beta_Q(const QuadraticApprox& q) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(q.gram);
  const double lmin = eig.eigenvalues().minCoeff();
  const double lmax = eig.eigenvalues().maxCoeff();
  if (!(lmin > 1e-12 * std::max(1.0, lmax))) {
    throw Error(ErrorCode::SingularGram, fmt::format("singular gram: minimum eigenvalue {}", lmin));
  }
  return (q.a * q.gram).ldlt().solve(q.score);
}

double plugin_curvature(const LinearSample& sample, const SmoothedLoss& smoothed) {
  if (!sample.e) throw Error(ErrorCode::IncompleteSample, "incomplete sample: true errors are required");
  double total = 0.0;
  for (double e : *sample.e) total += smoothed.second_derivative(e);
  return total / static_cast<double>(sample.n());
}

std::vector<Eigen::VectorXd> ball_probes(Eigen::Index d, double radius, int count) {
  std::vector<Eigen::VectorXd> probes;
  if (count < 1) return probes;
  probes.reserve(static_cast<std::size_t>(count));
  probes.push_back(Eigen::VectorXd::Zero(d));

  std::vector<Eigen::VectorXd> directions;
  int radii = 0;
  if (d == 1) {
    directions = {Eigen::VectorXd::Constant(1, -1.0), Eigen::VectorXd::Constant(1, 1.0)};
    radii = (count - 1) / 2;
  } else {
    if (d > static_cast<Eigen::Index>(std::size(kPrimes))) {
      throw Error(ErrorCode::UnsupportedDimension, "ball_probes supports d <= 16");
    }
    radii = std::min(16, std::max(1, (count - 1) / 2));
    const int ndir = std::max(1, (count - 1) / radii);
    for (int j = 0; j < ndir; ++j) {
      Eigen::VectorXd dir(d);
      for (Eigen::Index k = 0; k < d; ++k) {
        const double u = radical_inverse(static_cast<unsigned>(j + 1), kPrimes[k]);
        dir[k] = special::normal_quantile(std::clamp(u, 1e-12, 1.0 - 1e-12));
      }
      const double norm = dir.norm();
      if (norm > 0.0) directions.push_back(dir / norm);
    }
  }
  for (int r = 1; r <= radii; ++r) {
    const double rad = radius * static_cast<double>(r) / static_cast<double>(radii);
    for (const auto& dir : directions) {
      if (static_cast<int>(probes.size()) >= count) return probes;
      probes.push_back(rad * dir);
    }
  }
  return probes;
}

double approximation_gap(const LinearSample& sample, const LossSpec& loss, double a, double radius, int probes) {
  require_truth(sample);
  const QuadraticApprox q = build_quadratic(sample, loss, a);
  double worst = 0.0;
  for (const auto& beta : ball_probes(sample.d(), radius, probes)) {
    worst = std::max(worst, std::abs(tilde_L(sample, loss, beta) - q_value(q, beta)));
  }
  return worst;
}

MinimizerComparison compare_minimizers(const LinearSample& sample, const SmoothedLoss& smoothed, double a,
                                       const SolverOptions& opts) {
  require_truth(sample);
  MinimizerComparison out;
  out.fit = fit_smoothed(sample, smoothed, opts);
  out.beta_m = std::sqrt(static_cast<double>(sample.n())) * (out.fit.theta_hat - *sample.theta0);
  out.beta_q = beta_Q(build_quadratic(sample, smoothed.loss(), a));
  out.gap = (out.beta_m - out.beta_q).norm();
  return out;
}

double minimizer_gap(const LinearSample& sample, const LossSpec& loss, const MollifierKernel& kernel, double m,
                     double a, const SolverOptions& opts) {
  return compare_minimizers(sample, SmoothedLoss(loss, kernel, m), a, opts).gap;
}

double loglog_scale(double n) {
  if (!(n >= 16.0)) throw Error(ErrorCode::Domain, "loglog scale needs n >= 16");
  return std::pow(n, -0.25) * std::log(std::log(n));
}

}  // namespace mollikit
