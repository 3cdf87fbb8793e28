#pragma once

#include <stdexcept>
#include <string>

namespace mollikit {

enum class ErrorCode {
  InvalidArgument,
  InvalidScale,
  CurvatureUndefined,
  SingularDesign,
  NonCoerciveLoss,
  DegenerateRegressor,
  UnsupportedDimension,
  InvalidBandwidth,
  IncompleteSample,
  InvalidCurvature,
  SingularGram,
  Domain,
  Config,
  ExperimentQuality,
};

/// Library error carrying a machine-readable code alongside the message.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace mollikit
