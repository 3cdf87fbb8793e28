#pragma once

// Scalar distribution functions for the standard normal and Student t with
// four degrees of freedom.

namespace mollikit::special {

inline constexpr double kInvSqrt2Pi = 0.39894228040143267794;

double normal_pdf(double x);
double normal_cdf(double x);
/// Acklam's rational approximation refined by one Halley step; absolute
/// error well below 1e-12 on (0,1).
double normal_quantile(double p);

double student_t4_pdf(double t);
double student_t4_cdf(double t);
/// Bisection on student_t4_cdf to absolute tolerance 1e-12 in t.
double student_t4_quantile(double p);

}  // namespace mollikit::special
