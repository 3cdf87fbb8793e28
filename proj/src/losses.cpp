#include "mollikit/losses.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <fmt/format.h>

#include "mollikit/error.hpp"
#include "mollikit/quadrature.hpp"

namespace mollikit {

double CurvatureMeasure::density_at(double u) const {
  for (const auto& piece : density) {
    if (u >= piece.lo && u <= piece.hi) return piece.value;
  }
  return 0.0;
}

LossSpec::LossSpec(LossKind kind, double param) : kind_(kind), param_(param) {
  switch (kind_) {
    case LossKind::Huber:
      kinks_ = {-param_, param_};
      break;
    default:
      kinks_ = {0.0};
  }
}

LossSpec LossSpec::check(double tau) {
  if (!(tau > 0.0 && tau < 1.0)) {
    throw Error(ErrorCode::InvalidArgument, fmt::format("check loss needs tau in (0,1), got {}", tau));
  }
  return LossSpec(LossKind::Check, tau);
}

LossSpec LossSpec::huber(double c) {
  if (!(c > 0.0) || !std::isfinite(c)) {
    throw Error(ErrorCode::InvalidArgument, fmt::format("huber loss needs c > 0, got {}", c));
  }
  return LossSpec(LossKind::Huber, c);
}

LossSpec LossSpec::parse(const std::string& text) {
  const auto colon = text.find(':');
  const std::string head = text.substr(0, colon);
  auto number = [&]() {
    if (colon == std::string::npos) {
      throw Error(ErrorCode::InvalidArgument, "loss '" + head + "' needs a parameter, e.g. " + head + ":0.5");
    }
    const std::string tail = text.substr(colon + 1);
    std::istringstream in(tail);
    double v = 0.0;
    if (!(in >> v) || !in.eof()) throw Error(ErrorCode::InvalidArgument, "bad loss parameter '" + tail + "'");
    return v;
  };
  if (head == "abs" && colon == std::string::npos) return absolute();
  if (head == "relu" && colon == std::string::npos) return relu();
  if (head == "check") return check(number());
  if (head == "huber") return huber(number());
  throw Error(ErrorCode::InvalidArgument, "unknown loss '" + text + "' (expected abs|check:tau|huber:c|relu)");
}

std::string LossSpec::to_string() const {
  switch (kind_) {
    case LossKind::Absolute: return "abs";
    case LossKind::Check: return fmt::format("check:{}", param_);
    case LossKind::Huber: return fmt::format("huber:{}", param_);
    case LossKind::ReLU: return "relu";
  }
  return {};
}

double LossSpec::value(double u) const {
  switch (kind_) {
    case LossKind::Absolute: return std::abs(u);
    case LossKind::Check: return u * (param_ - (u < 0.0 ? 1.0 : 0.0));
    case LossKind::Huber: {
      const double a = std::abs(u);
      return a <= param_ ? 0.5 * u * u : param_ * a - 0.5 * param_ * param_;
    }
    case LossKind::ReLU: return u > 0.0 ? u : 0.0;
  }
  return 0.0;
}

double LossSpec::subgradient(double u) const {
  switch (kind_) {
    case LossKind::Absolute: return u < 0.0 ? -1.0 : 1.0;
    case LossKind::Check: return param_ - (u < 0.0 ? 1.0 : 0.0);
    case LossKind::Huber: return std::clamp(u, -param_, param_);
    case LossKind::ReLU: return u < 0.0 ? 0.0 : 1.0;
  }
  return 0.0;
}

double LossSpec::lipschitz() const {
  switch (kind_) {
    case LossKind::Check: return std::max(param_, 1.0 - param_);
    case LossKind::Huber: return param_;
    default: return 1.0;
  }
}

CurvatureMeasure LossSpec::curvature() const {
  switch (kind_) {
    case LossKind::Absolute: return {{{0.0, 2.0}}, {}};
    case LossKind::Check:
    case LossKind::ReLU: return {{{0.0, 1.0}}, {}};
    case LossKind::Huber: return {{}, {{-param_, param_, 1.0}}};
  }
  return {};
}

double LossSpec::curvature_density(double u) const {
  return kind_ == LossKind::Huber && std::abs(u) <= param_ ? 1.0 : 0.0;
}

double expected_curvature(const LossSpec& loss, const ErrorDensity& density) {
  const CurvatureMeasure measure = loss.curvature();
  double a = 0.0;
  for (const auto& atom : measure.atoms) {
    constexpr double h = 1e-9;
    const double left = density(atom.location - h);
    const double mid = density(atom.location);
    const double right = density(atom.location + h);
    if (!std::isfinite(left) || !std::isfinite(mid) || !std::isfinite(right) ||
        std::abs(left - right) > 1e-6 * std::max(1.0, std::abs(mid))) {
      throw Error(ErrorCode::CurvatureUndefined,
                  fmt::format("curvature undefined: density not continuous at atom {}", atom.location));
    }
    a += atom.mass * mid;
  }
  for (const auto& piece : measure.density) {
    const double lo = std::max(piece.lo, -density.support_halfwidth());
    const double hi = std::min(piece.hi, density.support_halfwidth());
    a += piece.value * quad::integrate_scalar([&](double u) { return density(u); }, lo, hi);
  }
  return a;
}

}  // namespace mollikit
