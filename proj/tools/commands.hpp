#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "gradflow/fields.hpp"

namespace gradflow::cli {

enum ExitCode : int {
  kOk = 0,
  kToleranceFailure = 1,
  kCriticalPoint = 2,
  kEarlyTermination = 3,
  kUsage = 64,
};

inline constexpr double kDefaultStep = 1e-3;
inline constexpr double kDefaultTolerance = 1e-6;
inline constexpr std::uint64_t kDefaultSeed = 0;

/// Inline JSON, or @path to a file holding it.
ScalarField parse_field_argument(const std::string& text);

/// "1,2.5,-3" -> vector
Vector parse_point(const std::string& text);
std::vector<double> parse_list(const std::string& text);

struct CurvatureArgs {
  std::string field;
  std::string point;
  std::optional<double> eps_grad;
  int samples = 10000;
  std::uint64_t seed = kDefaultSeed;
};

struct TraceArgs {
  std::string field;
  std::string p0;
  double arc_length = 1.0;
  std::optional<double> step;
  std::optional<double> eps_grad;
  std::string output;  // empty: stdout
};

struct VerifyArgs {
  std::string scenario_file;
  std::string output;  // empty: stdout
  std::string format = "json";
  std::optional<double> step;
  std::optional<double> eps_grad;
  std::optional<double> tolerance;
  std::optional<std::uint64_t> seed;
};

struct ConvergenceArgs {
  std::string field;
  std::string p0;
  double arc_length = 1.0;
  std::string steps = "8e-3,4e-3,2e-3,1e-3";
  std::optional<double> eps_grad;
};

int cmd_list_fields(std::ostream& out);
int cmd_curvature(const CurvatureArgs& args, std::ostream& out, std::ostream& err);
int cmd_trace(const TraceArgs& args, std::ostream& out, std::ostream& err);
int cmd_verify(const VerifyArgs& args, std::ostream& out, std::ostream& err);
int cmd_convergence(const ConvergenceArgs& args, std::ostream& out, std::ostream& err);

}  // namespace gradflow::cli
