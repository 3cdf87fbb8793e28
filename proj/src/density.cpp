#include "mollikit/density.hpp"

#include <cmath>

#include "mollikit/special.hpp"

namespace mollikit {

ErrorDensity ErrorDensity::standard_normal() {
  return ErrorDensity(
      "normal", [](double u) { return special::normal_pdf(u); },
      [](double u) { return -u * special::normal_pdf(u); }, 40.0);
}

ErrorDensity ErrorDensity::student_t4() {
  // f(t) = (3/8) s^{-5/2}, s = 1 + t^2/4, so f'(t) = -(15/16) t s^{-7/2}.
  return ErrorDensity(
      "t4", [](double t) { return special::student_t4_pdf(t); },
      [](double t) {
        const double s = 1.0 + 0.25 * t * t;
        return -0.9375 * t / (s * s * s * std::sqrt(s));
      },
      4000.0);
}

ErrorDensity ErrorDensity::shifted(double shift) const {
  auto f = pdf_;
  auto df = dpdf_;
  return ErrorDensity(
      name_, [f, shift](double u) { return f(u + shift); }, [df, shift](double u) { return df(u + shift); },
      halfwidth_ + std::abs(shift));
}

}  // namespace mollikit
