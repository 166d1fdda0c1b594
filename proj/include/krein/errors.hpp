#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace krein {

enum class ErrorKind {
  DimensionMismatch,
  InvalidInput,
  Precondition,
  BoundaryCollision,
  ClusterSeparation,
  QuadratureNonConvergence,
  SampleRangeCollapse,
  NotInSpectrum,
  Unsupported,
};

std::string_view to_string(ErrorKind kind);

/// Base exception for every failure raised by the toolkit. The kind is
/// machine-readable and survives into CLI error objects.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

  /// Numerical failures (as opposed to bad input or refused preconditions).
  bool is_numerical() const noexcept {
    return kind_ == ErrorKind::BoundaryCollision ||
           kind_ == ErrorKind::ClusterSeparation ||
           kind_ == ErrorKind::QuadratureNonConvergence ||
           kind_ == ErrorKind::SampleRangeCollapse;
  }

 private:
  ErrorKind kind_;
};

}  // namespace krein
