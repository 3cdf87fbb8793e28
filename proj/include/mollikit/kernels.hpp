#pragma once

#include <string>

namespace mollikit {

enum class KernelKind { Gaussian, CompactBump };

/// Smooth symmetric unit-mass density used to mollify a loss.
///
/// Gaussian is the standard normal density. CompactBump is
/// C * exp(-1 / (1 - v^2)) on (-1, 1) and zero elsewhere, with C chosen so
/// the density integrates to one.
class MollifierKernel {
 public:
  static MollifierKernel gaussian() { return MollifierKernel(KernelKind::Gaussian); }
  static MollifierKernel bump() { return MollifierKernel(KernelKind::CompactBump); }
  /// Accepts "gaussian" / "normal" and "bump" / "compact".
  static MollifierKernel parse(const std::string& text);

  KernelKind kind() const noexcept { return kind_; }
  std::string name() const;

  /// Half-width of the integration window in v. Exact for the bump; the
  /// Gaussian window is truncated at |v| = 8, beyond which the mass is < 1e-15.
  double window() const noexcept { return kind_ == KernelKind::Gaussian ? 8.0 : 1.0; }
  bool compact() const noexcept { return kind_ == KernelKind::CompactBump; }

  double value(double v) const;
  /// order in {0, 1, 2}.
  double derivative(double v, int order) const;
  /// Absolute moment  int |v|^k phi(v) dv  for k in {0, 1, 2}.
  double abs_moment(int k) const;

  /// Normalizer used in the density: 1/sqrt(2 pi) for Gaussian, C for the bump.
  double normalizer() const;

  friend bool operator==(const MollifierKernel&, const MollifierKernel&) = default;

 private:
  explicit MollifierKernel(KernelKind kind) : kind_(kind) {}
  KernelKind kind_;
};

/// C = 1 / int_{-1}^{1} exp(-1/(1-v^2)) dv, computed once.
double bump_normalizer();

}  // namespace mollikit
