#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <span>

namespace mollikit::quad {

inline constexpr std::size_t kNodesPerPanel = 50;

struct GaussLegendreRule {
  std::array<double, kNodesPerPanel> nodes;    // on [-1, 1]
  std::array<double, kNodesPerPanel> weights;
};

/// The 50-point Gauss–Legendre rule, built once on first use.
const GaussLegendreRule& gauss_legendre_50();

struct Options {
  double abs_tol = 1e-12;
  int max_halvings = 12;
};

/// Composite Gauss–Legendre over [a, b] for a vector-valued integrand.
/// The panel count doubles until two successive estimates agree in every
/// component to within `abs_tol`.
///
/// `f(x, out)` writes N components for the abscissa x.
template <std::size_t N, class F>
std::array<double, N> integrate(F&& f, double a, double b, const Options& opts = {}) {
  std::array<double, N> prev{};
  std::array<double, N> out{};
  if (!(b > a)) return out;
  const auto& rule = gauss_legendre_50();
  std::array<double, N> fx{};
  std::size_t panels = 1;
  for (int level = 0; level <= opts.max_halvings; ++level, panels *= 2) {
    out.fill(0.0);
    const double h = (b - a) / static_cast<double>(panels);
    for (std::size_t p = 0; p < panels; ++p) {
      const double lo = a + h * static_cast<double>(p);
      const double mid = lo + 0.5 * h;
      for (std::size_t i = 0; i < kNodesPerPanel; ++i) {
        f(mid + 0.5 * h * rule.nodes[i], fx);
        const double w = 0.5 * h * rule.weights[i];
        for (std::size_t k = 0; k < N; ++k) out[k] += w * fx[k];
      }
    }
    if (level > 0) {
      bool done = true;
      for (std::size_t k = 0; k < N; ++k) {
        if (!(std::abs(out[k] - prev[k]) < opts.abs_tol)) done = false;
      }
      if (done) break;
    }
    prev = out;
  }
  return out;
}

/// Scalar convenience wrapper.
template <class F>
double integrate_scalar(F&& f, double a, double b, const Options& opts = {}) {
  auto wrapped = [&](double x, std::array<double, 1>& y) { y[0] = f(x); };
  return integrate<1>(wrapped, a, b, opts)[0];
}

/// Integrates over [breaks.front(), breaks.back()] segment by segment; the
/// tolerance is split evenly across segments.
template <std::size_t N, class F>
std::array<double, N> integrate_segments(F&& f, std::span<const double> breaks,
                                         const Options& opts = {}) {
  std::array<double, N> total{};
  if (breaks.size() < 2) return total;
  Options seg = opts;
  seg.abs_tol = opts.abs_tol / static_cast<double>(breaks.size() - 1);
  for (std::size_t s = 0; s + 1 < breaks.size(); ++s) {
    const auto part = integrate<N>(f, breaks[s], breaks[s + 1], seg);
    for (std::size_t k = 0; k < N; ++k) total[k] += part[k];
  }
  return total;
}

}  // namespace mollikit::quad
