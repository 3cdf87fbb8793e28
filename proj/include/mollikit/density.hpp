#pragma once

#include <functional>
#include <string>
#include <utility>

namespace mollikit {

/// Density of the regression errors, used for expected curvature and the
/// derivative-gap diagnostic.
class ErrorDensity {
 public:
  using Fn = std::function<double(double)>;

  ErrorDensity(std::string name, Fn pdf, Fn pdf_derivative, double support_halfwidth)
      : name_(std::move(name)),
        pdf_(std::move(pdf)),
        dpdf_(std::move(pdf_derivative)),
        halfwidth_(support_halfwidth) {}

  static ErrorDensity standard_normal();
  static ErrorDensity student_t4();
  /// Density of eps - shift, i.e. f(u) = f_eps(u + shift).
  ErrorDensity shifted(double shift) const;

  const std::string& name() const noexcept { return name_; }
  double operator()(double u) const { return pdf_(u); }
  double derivative(double u) const { return dpdf_(u); }
  /// Interval [-h, h] outside which the mass is negligible for quadrature.
  double support_halfwidth() const noexcept { return halfwidth_; }

 private:
  std::string name_;
  Fn pdf_;
  Fn dpdf_;
  double halfwidth_;
};

}  // namespace mollikit
