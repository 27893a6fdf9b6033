#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gradflow/catalog.hpp"
#include "gradflow/fields.hpp"
#include "gradflow/flow.hpp"

namespace gradflow {

/// Both sides of ||grad u(p)|| = ||grad u(p0)|| exp((n-1) int H ds) at one flow endpoint.
///
/// Self-contained: rhs == identity_rhs(grad_norm_start, curvature_integral, dimension - 1).
struct VerificationRecord {
  std::string label;
  std::string group;
  std::optional<ScalarField> field;
  int dimension = 0;
  Vector p0;
  Vector p_end;
  double arc_length = 0.0;          // requested S
  double reached_arc_length = 0.0;  // < S only when the flow stopped early
  double step = 0.0;
  std::size_t samples = 0;
  double grad_norm_start = 0.0;
  double curvature_integral = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
  double rel_error = 0.0;
  std::optional<double> max_log_derivative_residual;
  std::string status = "ok";  // "ok", a Termination name, or an ErrorCode name
  std::string message;
  bool passed = false;

  bool completed() const { return status == "ok"; }
};

/// ||grad u(p0)|| * exp(exponent * curvature_integral).
double identity_rhs(double grad_norm_start, double curvature_integral, double exponent);

/// |a - b| / max(a, b); zero when both vanish.
double relative_error(double a, double b);

struct VerifyOptions {
  FlowOptions flow;
};

/// Throws NotHarmonic for non-harmonic fields. A flow that stops after at
/// least one accepted step yields a record with the termination status;
/// earlier failures propagate as errors.
VerificationRecord verify_identity(const ScalarField& field, const Vector& p0, double arc_length,
                                   double step, const VerifyOptions& options = {});

/// Relative errors at or below this are treated as roundoff, not truncation.
inline constexpr double kRoundoffFloor = 1e-14;

struct ConvergencePoint {
  double step = 0.0;
  double rel_error = 0.0;
};

struct ConvergenceStudy {
  std::vector<ConvergencePoint> points;
  /// Least-squares slope of log rel_error against log h over points above the
  /// roundoff floor; empty when fewer than two points qualify.
  std::optional<double> order;

  bool at_floor() const { return !order.has_value(); }
};

/// Steps must number at least three, each half the previous one.
ConvergenceStudy convergence_study(const ScalarField& field, const Vector& p0, double arc_length,
                                   std::span<const double> steps,
                                   const VerifyOptions& options = {});

struct Scenario {
  std::string label;
  std::string group;  // summary key; defaults to the field kind
  ScalarField field;
  Vector p0;
  double arc_length = 1.0;
  std::optional<double> step;
};

/// Random scenarios: `count` per (template, dimension), p0 uniform in
/// [box_lo, box_hi]^n and S uniform in [s_min, s_max].
struct RandomBlock {
  std::vector<std::string> fields;
  std::vector<int> dimensions;
  int count = 0;
  double box_lo = 1.0;
  double box_hi = 2.0;
  double s_min = 0.1;
  double s_max = 1.0;
};

struct BatchOptions {
  double step = 1e-3;
  double tolerance = 1e-6;
  VerifyOptions verify;
  /// Start points with ||grad u|| below this are redrawn.
  double min_start_grad = 0.05;
  /// Start points closer than this to a singular center are redrawn.
  double min_center_distance = 0.1;
  int max_draws = 10000;
  unsigned threads = 0;  // 0: hardware concurrency
};

/// Deterministic given the seed. Throws InvalidArgument when a template or
/// dimension is unknown or no admissible start point is found.
std::vector<Scenario> expand_random_block(const RandomBlock& block, Rng& rng,
                                          const BatchOptions& options);

struct GroupSummary {
  std::string group;
  int dimension = 0;
  int count = 0;
  int completed = 0;
  int passed = 0;
  double max_rel_error = 0.0;
  double median_rel_error = 0.0;
};

struct BatchSummary {
  int total = 0;
  int completed = 0;
  int passed = 0;
  int failed = 0;            // completed but above tolerance
  int early_terminated = 0;  // flow stopped at a guard
  int errors = 0;            // rejected before any step
  double max_rel_error = 0.0;
  double median_rel_error = 0.0;
  std::vector<GroupSummary> groups;
};

struct BatchReport {
  std::uint64_t seed = 0;
  BatchOptions options;
  std::vector<VerificationRecord> records;
  BatchSummary summary;

  /// True iff every completed scenario is within tolerance.
  bool all_passed() const { return summary.failed == 0; }
};

/// Explicit scenarios first, then the expansion of each random block, all in
/// input order. Scenarios run concurrently; individual failures are recorded.
BatchReport batch_run(std::vector<Scenario> scenarios, std::span<const RandomBlock> blocks,
                      std::uint64_t seed, const BatchOptions& options = {});

BatchSummary summarize(std::span<const VerificationRecord> records);

}  // namespace gradflow
