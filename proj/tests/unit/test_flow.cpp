#include <gtest/gtest.h>

#include <cmath>

#include "gradflow/error.hpp"
#include "gradflow/flow.hpp"
#include "support.hpp"

namespace gradflow {
namespace {

using testing::vec;

ScalarField saddle3() {
  return make_harmonic_polynomial(3, {{1.0, {2, 0, 0}}, {1.0, {0, 2, 0}}, {-2.0, {0, 0, 2}}});
}

ScalarField inverse_r() { return make_newtonian(Vector::Zero(3), 3); }

double max_abs(const std::vector<ArcValue>& values) {
  double m = 0.0;
  for (const auto& v : values) m = std::max(m, std::abs(v.value));
  return m;
}

ErrorCode code_of(const auto& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::invalid_argument;
}

TEST(TraceFlow, LinearFieldIsAStraightLine) {
  const FlowTrace t = trace_flow(make_linear(vec({0, 0, 1})), Vector::Zero(3), 1.0, 0.01);
  EXPECT_FALSE(t.terminated_early());
  ASSERT_EQ(t.samples.size(), 101u);
  EXPECT_LT((t.back().position - vec({0, 0, 1})).norm(), 1e-14);
  EXPECT_EQ(t.back().s, 1.0);
  EXPECT_EQ(t.curvature_integral(), 0.0);
  for (const auto& [s, g] : gradient_norm_along(t)) EXPECT_EQ(g, 1.0);
}

TEST(TraceFlow, NewtonianFlowsInwardAlongTheAxis) {
  const FlowTrace t = trace_flow(inverse_r(), vec({2, 0, 0}), 0.9, 1e-3);
  ASSERT_FALSE(t.terminated_early());
  for (const auto& smp : t.samples) {
    EXPECT_NEAR(smp.position[0], 2.0 - smp.s, 1e-12);
    EXPECT_EQ(smp.position[1], 0.0);
    EXPECT_NEAR(smp.mean_curv, 1.0 / (2.0 - smp.s), 1e-12);
  }
  // integral of ds / (2 - s) over [0, 0.9]
  EXPECT_NEAR(t.curvature_integral(), std::log(2.0 / 1.1), 1e-8);
  for (const auto& [s, g] : gradient_norm_along(t)) {
    EXPECT_NEAR(g, 1.0 / ((2.0 - s) * (2.0 - s)), 1e-12);
  }
}

TEST(TraceFlow, SaddleFlowStaysOnTheAxis) {
  const FlowTrace t = trace_flow(saddle3(), vec({1, 0, 0}), 1.0, 1e-3);
  ASSERT_FALSE(t.terminated_early());
  EXPECT_NEAR(t.back().position[0], 2.0, 1e-12);
  // H(x) = 2 / (2 * 2x) on the axis, x = 1 + s
  EXPECT_NEAR(t.curvature_integral(), 0.5 * std::log(2.0), 1e-8);
  for (const auto& [s, g] : gradient_norm_along(t)) EXPECT_NEAR(g, 2.0 * (1.0 + s), 1e-12);
}

TEST(TraceFlow, FinalPartialStepLandsOnArcLength) {
  const FlowTrace t = trace_flow(saddle3(), vec({1, 0.5, 0.2}), 0.1234, 1e-2);
  ASSERT_EQ(t.samples.size(), 14u);
  EXPECT_EQ(t.back().s, 0.1234);
  EXPECT_NEAR(t.samples[13].s - t.samples[12].s, 0.0034, 1e-15);
}

TEST(TraceFlow, ArgumentErrors) {
  const ScalarField f = inverse_r();
  EXPECT_EQ(code_of([&] { trace_flow(f, vec({1, 0}), 1.0, 0.1); }), ErrorCode::dimension_mismatch);
  EXPECT_EQ(code_of([&] { trace_flow(f, vec({1, 0, 0}), 0.1, 0.2); }),
            ErrorCode::invalid_argument);
  EXPECT_EQ(code_of([&] { trace_flow(f, vec({1, 0, 0}), 1.0, 0.0); }),
            ErrorCode::invalid_argument);
  EXPECT_EQ(code_of([&] { trace_flow(f, vec({0, 0, 0}), 1.0, 0.1); }), ErrorCode::singular_point);
  const ScalarField saddle = make_harmonic_polynomial(2, {{1.0, {2, 0}}, {-1.0, {0, 2}}});
  EXPECT_EQ(code_of([&] { trace_flow(saddle, vec({0, 0}), 1.0, 0.1); }),
            ErrorCode::critical_point);
}

TEST(TraceFlow, StopsAtCriticalPoint) {
  // Ascending u = x^2 - y^2 from (0, 1) runs down the y-axis into the saddle;
  // a dyadic step puts an RK4 stage exactly on it.
  const ScalarField saddle = make_harmonic_polynomial(2, {{1.0, {2, 0}}, {-1.0, {0, 2}}});
  const FlowTrace t = trace_flow(saddle, vec({0, 1}), 1.5, 1.0 / 1024);
  EXPECT_EQ(t.termination, Termination::critical_point);
  EXPECT_TRUE(t.terminated_early());
  EXPECT_LT(t.back().s, 1.0);
  EXPECT_GT(t.samples.size(), 1000u);
  for (const auto& smp : t.samples) EXPECT_GT(smp.grad_norm, 0.0);
}

TEST(TraceFlow, StopsAtPoleExclusionBall) {
  const FlowTrace t = trace_flow(inverse_r(), vec({2, 0, 0}), 3.0, 1e-3);
  EXPECT_EQ(t.termination, Termination::singular_point);
  EXPECT_LE(t.back().s, 2.0);
  EXPECT_GT(t.back().position[0], 0.0);
}

TEST(CheckLogDerivative, Examples) {
  const FlowTrace lin = trace_flow(make_linear(vec({0, 0, 1})), Vector::Zero(3), 1.0, 0.01);
  EXPECT_EQ(max_abs(check_log_derivative(lin, make_linear(vec({0, 0, 1})))), 0.0);

  const FlowTrace t = trace_flow(inverse_r(), vec({2, 0, 0}), 0.9, 1e-3);
  const auto residuals = check_log_derivative(t, inverse_r());
  EXPECT_EQ(residuals.size(), t.samples.size() - 2);
  EXPECT_LE(max_abs(residuals), 1e-5);

  const ScalarField sphere = testing::sphere_quadratic(3);
  const FlowTrace ts = trace_flow(sphere, vec({1, 0, 0}), 0.5, 1e-2);
  EXPECT_EQ(code_of([&] { check_log_derivative(ts, sphere); }), ErrorCode::not_harmonic);
}

TEST(CheckLogDerivative, NeedsThreeSamples) {
  const FlowTrace t = trace_flow(inverse_r(), vec({2, 0, 0}), 0.1, 0.1);
  EXPECT_EQ(code_of([&] { check_log_derivative(t, inverse_r()); }), ErrorCode::invalid_argument);
}

TEST(CheckLogDerivative, SkipsSliverFinalStep) {
  const FlowTrace t = trace_flow(inverse_r(), vec({2, 0, 0}), 0.1001, 0.01);
  const auto residuals = check_log_derivative(t, inverse_r());
  EXPECT_EQ(residuals.size(), t.samples.size() - 3);
}

TEST(SecondDerivativeIdentity, Examples) {
  const ScalarField lin = make_linear(vec({0, 0, 1}));
  EXPECT_LE(max_abs(second_derivative_identity(trace_flow(lin, Vector::Zero(3), 1.0, 0.01), lin)),
            1e-10);

  // g(s) = (1 + s)^2, g'' = 2 = Q(N, N)
  const ScalarField sphere = testing::sphere_quadratic(3);
  EXPECT_LE(max_abs(second_derivative_identity(trace_flow(sphere, vec({1, 0, 0}), 1.0, 1e-2),
                                               sphere)),
            1e-9);
}

TEST(SecondDerivativeIdentity, ResidualIsSecondOrder) {
  const ScalarField f = inverse_r();
  const double coarse = max_abs(second_derivative_identity(trace_flow(f, vec({2, 0, 0}), 0.9, 4e-3), f));
  const double fine = max_abs(second_derivative_identity(trace_flow(f, vec({2, 0, 0}), 0.9, 2e-3), f));
  EXPECT_GT(coarse, 0.0);
  EXPECT_NEAR(coarse / fine, 4.0, 0.2);
}

// Invariants over random traces of the harmonic catalog.

TEST(FlowProperties, UnitSpeedAscentAndLevelCrossing) {
  Rng rng(41);
  for (int n = 2; n <= 5; ++n) {
    for (const auto& [name, field] : testing::catalog_fields(n, rng, false)) {
      const Vector p0 = testing::random_point(n, rng);
      if (eval_jet(field, p0).gradient.norm() < 0.05) continue;
      const FlowTrace t = trace_flow(field, p0, 0.5, 1e-2);
      ASSERT_GE(t.samples.size(), 2u) << name;
      EXPECT_EQ(t.samples.front().position, p0);
      EXPECT_EQ(t.samples.front().s, 0.0);
      for (std::size_t k = 1; k < t.samples.size(); ++k) {
        const auto& a = t.samples[k - 1];
        const auto& b = t.samples[k];
        const double h = b.s - a.s;
        EXPECT_GT(h, 0.0);
        EXPECT_NEAR((b.position - a.position).norm(), h, 1e-3 * h) << name << " n=" << n;
        EXPECT_GT(b.value, a.value) << name << " n=" << n;
        EXPECT_GT(b.grad_norm, 0.0);
      }
      // every intermediate level is bracketed by a consecutive sample pair
      const double lo = t.samples.front().value;
      const double hi = t.back().value;
      for (int q = 1; q < 10; ++q) {
        const double level = lo + (hi - lo) * q / 10.0;
        bool bracketed = false;
        for (std::size_t k = 1; k < t.samples.size() && !bracketed; ++k) {
          bracketed = t.samples[k - 1].value <= level && level <= t.samples[k].value;
        }
        EXPECT_TRUE(bracketed) << name;
      }
    }
  }
}

struct RadialCase {
  ScalarField field;
  Vector p0;
  double arc_length;
  Vector end;           // exact endpoint
  double integral;      // exact curvature integral
};

std::vector<RadialCase> radial_cases() {
  std::vector<RadialCase> out;
  for (int n = 3; n <= 5; ++n) {
    // u = r^(2-n) ascends toward the center; H = 1/r
    const Vector dir = Vector::Ones(n).normalized();
    out.push_back({make_newtonian(Vector::Zero(n), n), dir, 0.8, 0.2 * dir, std::log(1.0 / 0.2)});
  }
  // u = log r ascends outward; H = -1/r
  const Vector dir2 = vec({0.6, 0.8});
  out.push_back({make_newtonian(Vector::Zero(2), 2), 0.2 * dir2, 0.8, dir2, -std::log(1.0 / 0.2)});
  return out;
}

TEST(FlowProperties, FourthOrderConvergenceOnRadialSolutions) {
  for (const auto& c : radial_cases()) {
    double prev_int = 0.0;
    double prev_pos = 0.0;
    for (double h : {4e-3, 2e-3, 1e-3}) {
      const FlowTrace t = trace_flow(c.field, c.p0, c.arc_length, h);
      ASSERT_FALSE(t.terminated_early());
      const double e_int = std::abs(t.curvature_integral() - c.integral);
      const double e_pos = (t.back().position - c.end).norm();
      if (prev_int > 1e-12) EXPECT_NEAR(prev_int / e_int, 16.0, 1.5) << "n=" << c.p0.size();
      if (prev_pos > 1e-12) EXPECT_NEAR(prev_pos / e_pos, 16.0, 1.5) << "n=" << c.p0.size();
      EXPECT_LT(e_pos, 1e-12);  // N is constant along a ray, so only roundoff remains
      prev_int = e_int;
      prev_pos = e_pos;
    }
  }
}

TEST(FlowProperties, ReversedFieldRetracesThePath) {
  Rng rng(42);
  for (int n = 2; n <= 4; ++n) {
    for (const char* name : {"re-z3", "dipole", "multi-index", "combo3"}) {
      const ScalarField u = instantiate_template(name, n, testing::kBox, rng);
      const Vector p0 = testing::random_point(n, rng);
      if (eval_jet(u, p0).gradient.norm() < 0.05) continue;
      const FlowTrace fwd = trace_flow(u, p0, 0.5, 1e-3);
      ASSERT_FALSE(fwd.terminated_early());
      const FlowTrace back = trace_flow(combine({{-1.0, u}}), fwd.back().position, 0.5, 1e-3);
      ASSERT_FALSE(back.terminated_early());
      EXPECT_LT((back.back().position - p0).norm(), 1e-9) << name << " n=" << n;
      // H flips sign with N, so the integrals cancel
      EXPECT_NEAR(fwd.curvature_integral() + back.curvature_integral(), 0.0, 1e-9) << name;
    }
  }
}

}  // namespace
}  // namespace gradflow
