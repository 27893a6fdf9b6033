#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace gradflow {

enum class ErrorCode {
  dimension_mismatch,
  singular_point,
  nonfinite_value,
  invalid_field_spec,
  critical_point,
  not_tangent,
  not_harmonic,
  invalid_argument,
  schema_error,
};

/// Stable snake_case name used in reports and CLI messages.
std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace gradflow
