#pragma once

#include <string>
#include <vector>

#include "mollikit/density.hpp"

namespace mollikit {

enum class LossKind { Absolute, Check, Huber, ReLU };

/// A point mass of the generalized second derivative.
struct Atom {
  double location;
  double mass;
};

/// Constant piece of the absolutely continuous part of rho''.
struct DensityPiece {
  double lo;
  double hi;
  double value;
};

/// Distributional second derivative of a convex loss: kink atoms plus a
/// piecewise-constant density.
struct CurvatureMeasure {
  std::vector<Atom> atoms;
  std::vector<DensityPiece> density;

  double density_at(double u) const;
};

/// Nonsmooth convex loss from the catalog {abs, check:tau, huber:c, relu}.
class LossSpec {
 public:
  static LossSpec absolute() { return LossSpec(LossKind::Absolute, 0.0); }
  static LossSpec check(double tau);
  static LossSpec huber(double c);
  static LossSpec relu() { return LossSpec(LossKind::ReLU, 0.0); }
  /// Grammar: "abs" | "check:<tau>" | "huber:<c>" | "relu".
  static LossSpec parse(const std::string& text);

  LossKind kind() const noexcept { return kind_; }
  /// tau for Check, c for Huber, 0 otherwise.
  double parameter() const noexcept { return param_; }
  std::string to_string() const;

  double value(double u) const;
  /// Right-continuous subgradient selection.
  double subgradient(double u) const;
  double lipschitz() const;
  const std::vector<double>& kinks() const noexcept { return kinks_; }
  CurvatureMeasure curvature() const;
  /// Absolutely continuous part of rho'' at u (the kink atoms excluded).
  double curvature_density(double u) const;
  /// False for ReLU, whose minimum is not unique.
  bool coercive() const noexcept { return kind_ != LossKind::ReLU; }

 private:
  LossSpec(LossKind kind, double param);

  LossKind kind_;
  double param_;
  std::vector<double> kinks_;
};

/// a = E[rho''(e)]: atom masses weighted by f at the atoms plus the
/// quadrature of the curvature density against f.
double expected_curvature(const LossSpec& loss, const ErrorDensity& density);

}  // namespace mollikit
