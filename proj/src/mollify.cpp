#include "mollikit/mollify.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include <fmt/format.h>

#include "mollikit/error.hpp"
#include "mollikit/parallel.hpp"
#include "mollikit/quadrature.hpp"
#include "mollikit/special.hpp"

namespace mollikit {

namespace {

void check_scale(double m) {
  if (!(m > 0.0) || !std::isfinite(m)) {
    throw Error(ErrorCode::InvalidScale, fmt::format("invalid scale m = {} (must be > 0)", m));
  }
}

}  // namespace

SmoothedLoss::SmoothedLoss(LossSpec loss, MollifierKernel kernel, double m, SmoothingOptions opts)
    : SmoothedLoss(loss, kernel, m,
                   closed_form_available(loss, kernel) ? SmoothingMethod::ClosedForm : SmoothingMethod::Quadrature,
                   opts) {}

SmoothedLoss::SmoothedLoss(LossSpec loss, MollifierKernel kernel, double m, SmoothingMethod method,
                           SmoothingOptions opts)
    : loss_(std::move(loss)), kernel_(kernel), m_(m), method_(method), opts_(opts), mu2_(0.0) {
  check_scale(m_);
  if (method_ == SmoothingMethod::ClosedForm && !closed_form_available(loss_, kernel_)) {
    throw Error(ErrorCode::InvalidArgument,
                fmt::format("no closed form for {} with {} kernel", loss_.to_string(), kernel_.name()));
  }
  mu2_ = kernel_.abs_moment(2);
}

bool SmoothedLoss::closed_form_available(const LossSpec& loss, const MollifierKernel& kernel) {
  return kernel.kind() == KernelKind::Gaussian && loss.kind() != LossKind::Huber;
}

SmoothedValues SmoothedLoss::evaluate(double u) const {
  return method_ == SmoothingMethod::ClosedForm ? closed_form(u) : quadrature(u);
}

SmoothedValues SmoothedLoss::closed_form(double u) const {
  const double z = m_ * u;
  const double pdf = special::normal_pdf(z);
  const double centered = std::erf(z / std::sqrt(2.0));  // 2 Phi(z) - 1
  SmoothedValues abs_part{u * centered + 2.0 * pdf / m_, centered, 2.0 * m_ * pdf};
  switch (loss_.kind()) {
    case LossKind::Absolute:
      return abs_part;
    case LossKind::Check: {
      const double skew = loss_.parameter() - 0.5;
      return {skew * u + 0.5 * abs_part.value, skew + 0.5 * abs_part.first, 0.5 * abs_part.second};
    }
    case LossKind::ReLU: {
      const double cdf = special::normal_cdf(z);
      return {u * cdf + pdf / m_, cdf, m_ * pdf};
    }
    case LossKind::Huber:
      break;
  }
  return quadrature(u);
}

SmoothedValues SmoothedLoss::quadrature(double u) const {
  const double w = kernel_.window();
  std::array<double, 8> breaks{};
  std::size_t nb = 0;
  breaks[nb++] = -w;
  for (double k : loss_.kinks()) {
    const double v = m_ * (k - u);
    if (v > -w && v < w) breaks[nb++] = v;
  }
  breaks[nb++] = w;
  std::sort(breaks.begin() + 1, breaks.begin() + static_cast<std::ptrdiff_t>(nb) - 1);

  const double rho_u = loss_.value(u);
  const double psi_u = loss_.subgradient(u);
  if (nb == 2 && opts_.polynomial_windows) {
    // rho(u + t) = rho(u) + psi(u) t + q t^2 / 2 on the whole window.
    const double q = loss_.curvature_density(u);
    return {rho_u + 0.5 * q * mu2_ / (m_ * m_), psi_u, q};
  }

  const double inv_m = 1.0 / m_;
  auto integrand = [&](double v, std::array<double, 3>& out) {
    const double x = u + v * inv_m;
    const double phi = kernel_.value(v);
    const double dpsi = loss_.subgradient(x) - psi_u;
    out[0] = (loss_.value(x) - rho_u) * phi;
    out[1] = dpsi * phi;
    out[2] = phi == 0.0 ? 0.0 : -m_ * dpsi * kernel_.derivative(v, 1);
  };
  const quad::Options qopts{.abs_tol = opts_.abs_tol, .max_halvings = 12};
  const auto r = quad::integrate_segments<3>(integrand, std::span<const double>(breaks.data(), nb), qopts);
  return {rho_u + r[0], psi_u + r[1], r[2]};
}

std::vector<double> make_grid(double lo, double hi, double step) {
  if (!(step > 0.0) || !(hi >= lo)) {
    throw Error(ErrorCode::InvalidArgument, fmt::format("bad grid {}:{}:{}", lo, hi, step));
  }
  const auto count = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
  std::vector<double> grid(count);
  for (std::size_t i = 0; i < count; ++i) grid[i] = lo + static_cast<double>(i) * step;
  return grid;
}

std::vector<double> parse_grid(const std::string& spec) {
  std::array<double, 3> parts{};
  std::size_t start = 0;
  for (std::size_t i = 0; i < 3; ++i) {
    const auto colon = spec.find(':', start);
    if ((i < 2) == (colon == std::string::npos)) {
      throw Error(ErrorCode::InvalidArgument, "grid must be lo:hi:step, got '" + spec + "'");
    }
    const std::string token = spec.substr(start, colon == std::string::npos ? std::string::npos : colon - start);
    std::istringstream in(token);
    if (!(in >> parts[i]) || !in.eof()) {
      throw Error(ErrorCode::InvalidArgument, "grid must be lo:hi:step, got '" + spec + "'");
    }
    start = colon + 1;
  }
  return make_grid(parts[0], parts[1], parts[2]);
}

std::vector<double> smooth_values(const SmoothedLoss& s, std::span<const double> grid, int threads) {
  std::vector<double> out(grid.size());
  parallel::for_each_index(grid.size(), threads, [&](std::size_t i) { out[i] = s.value(grid[i]); });
  return out;
}

std::vector<double> smooth_values_serial(const SmoothedLoss& s, std::span<const double> grid) {
  std::vector<double> out(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) out[i] = s.value(grid[i]);
  return out;
}

double sup_error(const SmoothedLoss& s, std::span<const double> grid, int threads) {
  const int workers = parallel::resolve_threads(threads);
  const auto n = static_cast<long long>(grid.size());
  double worst = 0.0;
#pragma omp parallel for num_threads(workers) reduction(max : worst) schedule(static)
  for (long long i = 0; i < n; ++i) {
    const double u = grid[static_cast<std::size_t>(i)];
    worst = std::max(worst, std::abs(s.value(u) - s.loss().value(u)));
  }
  return worst;
}

double sup_error_serial(const SmoothedLoss& s, std::span<const double> grid) {
  double worst = 0.0;
  for (double u : grid) worst = std::max(worst, std::abs(s.value(u) - s.loss().value(u)));
  return worst;
}

double expected_derivative_gap(const LossSpec& loss, const MollifierKernel& kernel, double m,
                               const ErrorDensity& density) {
  check_scale(m);
  const SmoothedLoss s(loss, kernel, m);
  const double half = kernel.window() / m;
  std::vector<double> breaks;
  for (double k : loss.kinks()) {
    breaks.insert(breaks.end(), {k - half, k, k + half});
  }
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());

  auto integrand = [&](double u, std::array<double, 1>& out) {
    out[0] = std::abs(s.derivative(u) - loss.subgradient(u)) * density(u);
  };
  const quad::Options opts{.abs_tol = 1e-12, .max_halvings = 10};
  return quad::integrate_segments<1>(integrand, breaks, opts)[0];
}

}  // namespace mollikit
