#include "gradflow/flow.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <optional>
#include <string>

#include "gradflow/error.hpp"

namespace gradflow {

std::string_view to_string(Termination t) {
  switch (t) {
    case Termination::none: return "ok";
    case Termination::critical_point: return "critical_point";
    case Termination::singular_point: return "singular_point";
    case Termination::nonfinite_value: return "nonfinite_value";
  }
  return "unknown";
}

namespace {

struct StageValue {
  Vector normal;
  double mean_curv = 0.0;
  double value = 0.0;
  double grad_norm = 0.0;
};

struct StageFailure {
  Termination kind = Termination::none;
  std::string reason;
};

double distance_to_segment(const Vector& c, const Vector& a, const Vector& b) {
  const Vector ab = b - a;
  const double len2 = ab.squaredNorm();
  const double t = len2 > 0.0 ? std::clamp((c - a).dot(ab) / len2, 0.0, 1.0) : 0.0;
  return (a + t * ab - c).norm();
}

class FlowRhs {
 public:
  FlowRhs(const ScalarField& field, const FlowOptions& options)
      : field_(field), options_(options) {}

  // Evaluates N and H at p, reached along the straight segment from `from`.
  std::optional<StageValue> operator()(const Vector& from, const Vector& p) {
    for (const auto& c : field_.singular_centers()) {
      if (distance_to_segment(c, from, p) < options_.exclusion_radius) {
        return fail(Termination::singular_point, "flow entered the exclusion ball of a pole");
      }
    }
    Jet2 jet;
    try {
      jet = field_.jet(p);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::singular_point) return fail(Termination::singular_point, e.what());
      if (e.code() == ErrorCode::nonfinite_value) {
        return fail(Termination::nonfinite_value, e.what());
      }
      throw;
    }
    const double g = jet.gradient.norm();
    if (!(g >= options_.eps_grad)) {
      char msg[96];
      std::snprintf(msg, sizeof msg, "gradient norm %.3g fell below eps_grad %.3g", g,
                    options_.eps_grad);
      return fail(Termination::critical_point, msg);
    }
    StageValue out{jet.gradient / g, mean_curvature(jet, options_.eps_grad), jet.value, g};
    if (!out.normal.allFinite() || !std::isfinite(out.mean_curv)) {
      return fail(Termination::nonfinite_value, "non-finite normal or mean curvature");
    }
    return out;
  }

  const StageFailure& failure() const { return failure_; }

 private:
  std::nullopt_t fail(Termination kind, std::string reason) {
    failure_ = StageFailure{kind, std::move(reason)};
    return std::nullopt;
  }

  const ScalarField& field_;
  const FlowOptions& options_;
  StageFailure failure_;
};

void kahan_add(double& sum, double& carry, double increment) {
  const double y = increment - carry;
  const double t = sum + y;
  carry = (t - sum) - y;
  sum = t;
}

FlowSample make_sample(double s, const Vector& position, const StageValue& at, double integral) {
  return FlowSample{s, position, at.value, at.grad_norm, at.mean_curv, integral};
}

ErrorCode error_code_for(Termination t) {
  switch (t) {
    case Termination::critical_point: return ErrorCode::critical_point;
    case Termination::singular_point: return ErrorCode::singular_point;
    default: return ErrorCode::nonfinite_value;
  }
}

}  // namespace

FlowTrace trace_flow(const ScalarField& field, const Vector& p0, double arc_length, double step,
                     const FlowOptions& options) {
  const int n = field.dimension();
  if (p0.size() != n) {
    throw Error(ErrorCode::dimension_mismatch, "p0 has length " + std::to_string(p0.size()) +
                                                   ", field dimension is " + std::to_string(n));
  }
  if (!(arc_length > 0.0) || !(step > 0.0) || !std::isfinite(arc_length)) {
    throw Error(ErrorCode::invalid_argument, "arc length and step must be positive");
  }
  if (step > arc_length) throw Error(ErrorCode::invalid_argument, "step exceeds arc length");

  FlowRhs rhs(field, options);
  auto start = rhs(p0, p0);
  if (!start) {
    throw Error(error_code_for(rhs.failure().kind), "flow start point: " + rhs.failure().reason);
  }

  FlowTrace trace;
  trace.step = step;
  trace.arc_length = arc_length;
  trace.dimension = n;

  auto full_steps = static_cast<long>(std::floor(arc_length / step + 1e-9));
  double remainder = arc_length - static_cast<double>(full_steps) * step;
  if (std::abs(remainder) <= 1e-9 * step) remainder = 0.0;
  const long total_steps = full_steps + (remainder > 0.0 ? 1 : 0);
  trace.samples.reserve(static_cast<std::size_t>(total_steps) + 1);

  Vector pos = p0;
  Vector pos_carry = Vector::Zero(n);
  double integral = 0.0;
  double integral_carry = 0.0;
  StageValue k1 = *start;
  trace.samples.push_back(make_sample(0.0, pos, k1, 0.0));

  for (long k = 0; k < total_steps; ++k) {
    const bool last = k + 1 == total_steps;
    const double h = (last && remainder > 0.0) ? remainder : step;
    const double s1 = last ? arc_length : static_cast<double>(k + 1) * step;

    auto k2 = rhs(pos, pos + (0.5 * h) * k1.normal);
    if (!k2) break;
    auto k3 = rhs(pos, pos + (0.5 * h) * k2->normal);
    if (!k3) break;
    auto k4 = rhs(pos, pos + h * k3->normal);
    if (!k4) break;

    const Vector dpos = (h / 6.0) * (k1.normal + 2.0 * k2->normal + 2.0 * k3->normal + k4->normal);
    const double dint =
        (h / 6.0) * (k1.mean_curv + 2.0 * k2->mean_curv + 2.0 * k3->mean_curv + k4->mean_curv);

    Vector next = pos;
    Vector next_carry = pos_carry;
    for (int i = 0; i < n; ++i) kahan_add(next[i], next_carry[i], dpos[i]);
    double next_integral = integral;
    double next_integral_carry = integral_carry;
    kahan_add(next_integral, next_integral_carry, dint);

    auto at_next = rhs(pos, next);
    if (!at_next) break;

    pos = std::move(next);
    pos_carry = std::move(next_carry);
    integral = next_integral;
    integral_carry = next_integral_carry;
    k1 = std::move(*at_next);
    trace.samples.push_back(make_sample(s1, pos, k1, integral));
  }

  if (trace.samples.size() < static_cast<std::size_t>(total_steps) + 1) {
    trace.termination = rhs.failure().kind;
    trace.reason = rhs.failure().reason;
  }
  return trace;
}

std::vector<ArcValue> gradient_norm_along(const FlowTrace& trace) {
  std::vector<ArcValue> out;
  out.reserve(trace.samples.size());
  for (const auto& s : trace.samples) out.push_back({s.s, s.grad_norm});
  return out;
}

namespace {

// Interior samples whose stencil spacings are both at least a quarter of the
// nominal step; a sliver final step would otherwise amplify roundoff.
template <typename Fn>
std::vector<ArcValue> for_each_interior(const FlowTrace& trace, Fn&& fn) {
  if (trace.samples.size() < 3) {
    throw Error(ErrorCode::invalid_argument, "need a trace with at least 3 samples");
  }
  std::vector<ArcValue> out;
  out.reserve(trace.samples.size() - 2);
  for (std::size_t k = 1; k + 1 < trace.samples.size(); ++k) {
    const auto& a = trace.samples[k - 1];
    const auto& b = trace.samples[k];
    const auto& c = trace.samples[k + 1];
    const double h1 = b.s - a.s;
    const double h2 = c.s - b.s;
    if (h1 < 0.25 * trace.step || h2 < 0.25 * trace.step) continue;
    out.push_back({b.s, fn(a, b, c, h1, h2)});
  }
  return out;
}

}  // namespace

std::vector<ArcValue> check_log_derivative(const FlowTrace& trace, const ScalarField& field) {
  if (!field.harmonic()) {
    throw Error(ErrorCode::not_harmonic, "log-derivative identity requires a harmonic field");
  }
  const double inv = 1.0 / (trace.dimension - 1);
  return for_each_interior(trace, [inv](const FlowSample& a, const FlowSample& b,
                                        const FlowSample& c, double h1, double h2) {
    const double fa = std::log(a.grad_norm);
    const double fb = std::log(b.grad_norm);
    const double fc = std::log(c.grad_norm);
    const double d = -h2 / (h1 * (h1 + h2)) * fa + (h2 - h1) / (h1 * h2) * fb +
                     h1 / (h2 * (h1 + h2)) * fc;
    return b.mean_curv - inv * d;
  });
}

std::vector<ArcValue> second_derivative_identity(const FlowTrace& trace,
                                                 const ScalarField& field) {
  return for_each_interior(trace, [&field](const FlowSample& a, const FlowSample& b,
                                           const FlowSample& c, double h1, double h2) {
    const Jet2 jet = field.jet(b.position);
    const Vector normal = jet.gradient.normalized();
    const double qnn = normal.dot(jet.hessian * normal);
    const double d2 =
        2.0 * (a.value / (h1 * (h1 + h2)) - b.value / (h1 * h2) + c.value / (h2 * (h1 + h2)));
    return qnn - d2;
  });
}

}  // namespace gradflow
