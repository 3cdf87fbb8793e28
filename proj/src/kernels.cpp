#include "mollikit/kernels.hpp"

#include <array>
#include <cmath>
#include <numbers>

#include "mollikit/error.hpp"
#include "mollikit/quadrature.hpp"
#include "mollikit/special.hpp"

namespace mollikit {

namespace {

// Below this the bump underflows far past double precision.
constexpr double kBumpEdge = 1e-12;

double bump_shape(double v) {
  const double s = 1.0 - v * v;
  if (s < kBumpEdge) return 0.0;
  return std::exp(-1.0 / s);
}

// 2 * int_0^1 v^k exp(-1/(1-v^2)) dv, split at 0.99 for the flat boundary layer.
double bump_shape_moment(int k) {
  const quad::Options opts{.abs_tol = 1e-15, .max_halvings = 14};
  auto f = [k](double v) { return std::pow(v, k) * bump_shape(v); };
  return 2.0 * (quad::integrate_scalar(f, 0.0, 0.99, opts) + quad::integrate_scalar(f, 0.99, 1.0, opts));
}

}  // namespace

double bump_normalizer() {
  static const double c = 1.0 / bump_shape_moment(0);
  return c;
}

MollifierKernel MollifierKernel::parse(const std::string& text) {
  if (text == "gaussian" || text == "normal") return gaussian();
  if (text == "bump" || text == "compact") return bump();
  throw Error(ErrorCode::InvalidArgument, "unknown kernel '" + text + "' (expected gaussian|bump)");
}

std::string MollifierKernel::name() const { return kind_ == KernelKind::Gaussian ? "gaussian" : "bump"; }

double MollifierKernel::normalizer() const {
  return kind_ == KernelKind::Gaussian ? special::kInvSqrt2Pi : bump_normalizer();
}

double MollifierKernel::value(double v) const {
  if (kind_ == KernelKind::Gaussian) return special::normal_pdf(v);
  return bump_normalizer() * bump_shape(v);
}

double MollifierKernel::derivative(double v, int order) const {
  if (order < 0 || order > 2) {
    throw Error(ErrorCode::InvalidArgument, "kernel derivative order must be 0, 1 or 2");
  }
  const double phi = value(v);
  if (order == 0) return phi;
  if (kind_ == KernelKind::Gaussian) {
    return order == 1 ? -v * phi : (v * v - 1.0) * phi;
  }
  if (phi == 0.0) return 0.0;
  // phi = C exp(g), g = -1/s, s = 1 - v^2.
  const double s = 1.0 - v * v;
  const double g1 = -2.0 * v / (s * s);
  if (order == 1) return phi * g1;
  const double g2 = -2.0 / (s * s) - 8.0 * v * v / (s * s * s);
  return phi * (g1 * g1 + g2);
}

double MollifierKernel::abs_moment(int k) const {
  if (k < 0 || k > 2) throw Error(ErrorCode::InvalidArgument, "abs_moment order must be 0, 1 or 2");
  if (kind_ == KernelKind::Gaussian) {
    static constexpr std::array<double, 3> closed = {1.0, 0.79788456080286535588, 1.0};
    return closed[static_cast<std::size_t>(k)];
  }
  static const std::array<double, 3> bump = {
      bump_normalizer() * bump_shape_moment(0),
      bump_normalizer() * bump_shape_moment(1),
      bump_normalizer() * bump_shape_moment(2),
  };
  return bump[static_cast<std::size_t>(k)];
}

}  // namespace mollikit
