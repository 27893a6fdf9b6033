#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "gradflow/diffgeo.hpp"
#include "gradflow/fields.hpp"

namespace gradflow {

struct FlowOptions {
  double eps_grad = kDefaultEpsGrad;
  /// Radius of the ball around each potential center that aborts the flow.
  double exclusion_radius = 1e-6;
};

enum class Termination { none, critical_point, singular_point, nonfinite_value };

std::string_view to_string(Termination t);

struct FlowSample {
  double s = 0.0;
  Vector position;
  double value = 0.0;
  double grad_norm = 0.0;
  double mean_curv = 0.0;
  double curv_integral = 0.0;  // integral of H from 0 to s
};

/// Unit-speed ascending gradient flow, sampled at every accepted RK4 step.
struct FlowTrace {
  std::vector<FlowSample> samples;
  double step = 0.0;
  double arc_length = 0.0;  // requested S
  int dimension = 0;
  Termination termination = Termination::none;
  std::string reason;

  bool terminated_early() const { return termination != Termination::none; }
  double curvature_integral() const { return samples.back().curv_integral; }
  const FlowSample& back() const { return samples.back(); }
};

/// Classical RK4 on the augmented system phi' = N(phi), I' = H(phi).
///
/// Steps are fixed at `step`; a final partial step lands exactly on
/// s = arc_length. Every stage evaluation is guarded: a critical point,
/// entry into an exclusion ball or a non-finite value ends the trace at the
/// last good sample and sets `termination`. Invalid arguments, or a start
/// point that is itself critical or singular, throw.
FlowTrace trace_flow(const ScalarField& field, const Vector& p0, double arc_length, double step,
                     const FlowOptions& options = {});

struct ArcValue {
  double s = 0.0;
  double value = 0.0;
};

/// g'(s) = ||grad u(phi(s))|| at every sample.
std::vector<ArcValue> gradient_norm_along(const FlowTrace& trace);

/// H - (1/(n-1)) d/ds log ||grad u|| at interior samples, with the derivative
/// from three-point (possibly non-uniform) centered differences. Harmonic
/// fields only; throws NotHarmonic otherwise.
std::vector<ArcValue> check_log_derivative(const FlowTrace& trace, const ScalarField& field);

/// Q(N,N) minus the centered second difference of u(phi(s)). Any C^2 field.
std::vector<ArcValue> second_derivative_identity(const FlowTrace& trace,
                                                 const ScalarField& field);

}  // namespace gradflow
