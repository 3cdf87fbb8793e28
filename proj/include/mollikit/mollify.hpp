#pragma once

#include <span>
#include <string>
#include <vector>

#include "mollikit/density.hpp"
#include "mollikit/kernels.hpp"
#include "mollikit/losses.hpp"

namespace mollikit {

enum class SmoothingMethod { ClosedForm, Quadrature };

struct SmoothingOptions {
  /// Absolute target for each quadrature component.
  double abs_tol = 1e-11;
  /// When the kernel window around u contains no kink, the loss is a
  /// polynomial of degree <= 2 there and the convolution reduces to kernel
  /// moments. Disable to force quadrature everywhere.
  bool polynomial_windows = true;
};

struct SmoothedValues {
  double value = 0.0;
  double first = 0.0;
  double second = 0.0;
};

/// The regular sequence member rho_m = rho * phi_m, phi_m(u) = m phi(m u).
///
/// rho_m(u)   = int rho(u + v/m) phi(v) dv
/// rho_m'(u)  = int psi(u + v/m) phi(v) dv
/// rho_m''(u) = -m int psi(u + v/m) phi'(v) dv
///
/// Quadrature splits the kernel window at every kink mapped into v-space.
/// Gaussian x {abs, check, relu} also has a closed form in terms of the
/// normal cdf and density.
class SmoothedLoss {
 public:
  /// Uses the closed form when available, quadrature otherwise.
  SmoothedLoss(LossSpec loss, MollifierKernel kernel, double m, SmoothingOptions opts = {});
  /// Throws InvalidArgument if `method` is ClosedForm and none exists.
  SmoothedLoss(LossSpec loss, MollifierKernel kernel, double m, SmoothingMethod method,
               SmoothingOptions opts = {});

  static bool closed_form_available(const LossSpec& loss, const MollifierKernel& kernel);

  const LossSpec& loss() const noexcept { return loss_; }
  const MollifierKernel& kernel() const noexcept { return kernel_; }
  double m() const noexcept { return m_; }
  SmoothingMethod method() const noexcept { return method_; }

  double value(double u) const { return evaluate(u).value; }
  double derivative(double u) const { return evaluate(u).first; }
  double second_derivative(double u) const { return evaluate(u).second; }
  SmoothedValues evaluate(double u) const;

 private:
  SmoothedValues closed_form(double u) const;
  SmoothedValues quadrature(double u) const;

  LossSpec loss_;
  MollifierKernel kernel_;
  double m_;
  SmoothingMethod method_;
  SmoothingOptions opts_;
  double mu2_;
};

/// Points lo, lo+step, ... up to hi (inclusive within rounding).
std::vector<double> make_grid(double lo, double hi, double step);
/// Parses "lo:hi:step".
std::vector<double> parse_grid(const std::string& spec);

/// Smoothed values at every grid point (OpenMP over points).
std::vector<double> smooth_values(const SmoothedLoss& s, std::span<const double> grid, int threads = 0);
std::vector<double> smooth_values_serial(const SmoothedLoss& s, std::span<const double> grid);

/// max over the grid of |rho_m(u) - rho(u)| (OpenMP max-reduction).
double sup_error(const SmoothedLoss& s, std::span<const double> grid, int threads = 0);
/// Single-threaded reference for sup_error.
double sup_error_serial(const SmoothedLoss& s, std::span<const double> grid);

/// int |rho_m'(u) - psi(u)| f(u) du. The integrand vanishes (bump) or is
/// negligible (Gaussian) outside kink +- window/m, so only those windows
/// are integrated, split at the kinks.
double expected_derivative_gap(const LossSpec& loss, const MollifierKernel& kernel, double m,
                               const ErrorDensity& density);

}  // namespace mollikit
