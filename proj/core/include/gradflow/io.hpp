#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "gradflow/fields.hpp"
#include "gradflow/flow.hpp"
#include "gradflow/verify.hpp"

namespace gradflow {

inline constexpr const char* kSchemaVersion = "1";

/// Field descriptors, e.g. {"kind":"newtonian","center":[0,0,0],"dimension":3}.
/// Parsing throws SchemaError for malformed JSON shapes and the field
/// constructors' errors for invalid parameters.
nlohmann::json field_to_json(const ScalarField& field);
ScalarField field_from_json(const nlohmann::json& j);

struct ScenarioDefaults {
  std::optional<double> step;
  std::optional<double> eps_grad;
  std::optional<std::uint64_t> seed;
  std::optional<double> tolerance;
};

struct ScenarioFile {
  std::string version = kSchemaVersion;
  ScenarioDefaults defaults;
  std::vector<Scenario> scenarios;
  std::optional<RandomBlock> random_block;
};

/// Validates the whole document (unknown keys rejected, p0 lengths checked)
/// before anything is evaluated. Throws SchemaError.
ScenarioFile parse_scenario_file(const nlohmann::json& j);
ScenarioFile load_scenario_file(const std::filesystem::path& path);

nlohmann::json record_to_json(const VerificationRecord& record);
nlohmann::json report_to_json(const BatchReport& report);

/// field, n, p0, S, h, lhs, rhs, rel_error, status; p0 coordinates joined by ';'.
std::string report_to_csv(const BatchReport& report);

/// s, x_1..x_n, grad_norm, mean_curv, curv_integral.
std::string trace_to_csv(const FlowTrace& trace);

/// %.17g
std::string format_exact(double v);

}  // namespace gradflow
