#include "gradflow/error.hpp"

namespace gradflow {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::dimension_mismatch: return "dimension_mismatch";
    case ErrorCode::singular_point: return "singular_point";
    case ErrorCode::nonfinite_value: return "nonfinite_value";
    case ErrorCode::invalid_field_spec: return "invalid_field_spec";
    case ErrorCode::critical_point: return "critical_point";
    case ErrorCode::not_tangent: return "not_tangent";
    case ErrorCode::not_harmonic: return "not_harmonic";
    case ErrorCode::invalid_argument: return "invalid_argument";
    case ErrorCode::schema_error: return "schema_error";
  }
  return "unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

}  // namespace gradflow
