#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace robust_merton {

/// Failure categories raised by the library. The CLI maps the input
/// categories to exit code 2 and the numerical ones to exit code 3.
enum class ErrorKind {
  // input validation
  InvalidDimension,
  InvalidMarket,
  InvalidProfile,
  InvalidUncertainty,
  InvalidRadius,
  InvalidArgument,
  OutOfRange,
  InvalidSample,
  // numerical
  SingularGeometry,
  NotPositiveDefinite,
  DegenerateSpectrum,
  KernelMismatch,
  Convergence,
  InternalConsistency,
  DegenerateDirection,
};

std::string_view to_string(ErrorKind kind);

/// True for kinds that describe bad caller input rather than a numerical breakdown.
bool is_input_error(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace robust_merton
