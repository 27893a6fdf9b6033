#pragma once

#include <cstdint>

#include "gradflow/fields.hpp"

namespace gradflow {

inline constexpr double kDefaultEpsGrad = 1e-10;

/// Unit normal N = grad f / ||grad f|| with an orthonormal basis of the
/// tangent space of the level hypersurface through `point`.
struct LevelSetFrame {
  Vector point;
  Vector normal;
  Matrix tangent_basis;  // n x (n-1), columns are the tangent vectors
  double grad_norm = 0.0;
};

/// 1e-10 * (1 + ||hessian||_max * max(1, ||p||_inf)).
double default_eps_grad(const Jet2& jet);

/// Throws CriticalPoint when ||grad|| < eps_grad.
///
/// The tangent basis comes from the Householder reflection that sends e_n to
/// +-N; its first n-1 columns are orthonormal and orthogonal to N.
LevelSetFrame frame_at(const Jet2& jet, double eps_grad = kDefaultEpsGrad);

/// Signed curvature of the normal section in direction v, kappa = -Q(v,v)/||grad f||.
/// Positive when the section bends toward N.
double normal_section_curvature(const Jet2& jet, const Vector& v,
                                double eps_grad = kDefaultEpsGrad);

/// (Q(N,N) - tr Q) / ((n-1) ||grad f||). Convex level sets with outward N get H < 0.
double mean_curvature(const Jet2& jet, double eps_grad = kDefaultEpsGrad);

/// -(sum_i Q(t_i,t_i)) / ((n-1) ||grad f||) over the frame's tangent vectors.
double mean_curvature_by_tangent_trace(const Jet2& jet, const LevelSetFrame& frame);

struct AveragingEstimate {
  double estimate = 0.0;
  double std_error = 0.0;
};

/// Monte-Carlo mean of normal_section_curvature over uniformly random unit
/// tangent directions, with the standard error of the mean.
AveragingEstimate mean_curvature_by_averaging(const Jet2& jet, const LevelSetFrame& frame,
                                              int n_samples, std::uint64_t seed);

/// n = 3 only: equispaced trapezoid average over the unit tangent circle.
/// Exact (up to roundoff) for the quadratic integrand.
double mean_curvature_by_circle_quadrature(const Jet2& jet, const LevelSetFrame& frame,
                                           int n_angles = 64);

}  // namespace gradflow
