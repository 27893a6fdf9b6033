#include "gradflow/diffgeo.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>
#include <string>

#include "gradflow/error.hpp"

namespace gradflow {

namespace {

double checked_grad_norm(const Jet2& jet, double eps_grad) {
  const double g = jet.gradient.norm();
  if (!(g >= eps_grad)) {
    char msg[96];
    std::snprintf(msg, sizeof msg, "gradient norm %.3g is below eps_grad %.3g", g, eps_grad);
    throw Error(ErrorCode::critical_point, msg);
  }
  return g;
}

void check_frame(const Jet2& jet, const LevelSetFrame& frame) {
  const int n = jet.dimension();
  if (frame.normal.size() != n || frame.tangent_basis.rows() != n ||
      frame.tangent_basis.cols() != n - 1) {
    throw Error(ErrorCode::dimension_mismatch, "frame does not match jet dimension");
  }
  if (!(frame.grad_norm > 0.0)) {
    throw Error(ErrorCode::critical_point, "frame has zero gradient norm");
  }
}

double quadratic_form(const Matrix& q, const Vector& v) { return v.dot(q * v); }

}  // namespace

double default_eps_grad(const Jet2& jet) {
  const double h = jet.hessian.size() > 0 ? jet.hessian.cwiseAbs().maxCoeff() : 0.0;
  const double scale = jet.point.size() > 0 ? std::max(1.0, jet.point.cwiseAbs().maxCoeff()) : 1.0;
  return 1e-10 * (1.0 + h * scale);
}

LevelSetFrame frame_at(const Jet2& jet, double eps_grad) {
  const int n = jet.dimension();
  const double g = checked_grad_norm(jet, eps_grad);
  const Vector normal = jet.gradient / g;

  // Reflect e_n onto sigma*N, picking sigma so that v_n = 1 + |N_n| never cancels.
  const double sigma = normal[n - 1] >= 0.0 ? -1.0 : 1.0;
  Vector v = -sigma * normal;
  v[n - 1] += 1.0;
  const Matrix reflector = Matrix::Identity(n, n) - (2.0 / v.squaredNorm()) * v * v.transpose();

  return LevelSetFrame{jet.point, normal, reflector.leftCols(n - 1), g};
}

double normal_section_curvature(const Jet2& jet, const Vector& v, double eps_grad) {
  if (v.size() != jet.dimension()) {
    throw Error(ErrorCode::dimension_mismatch, "direction length differs from jet dimension");
  }
  const double g = checked_grad_norm(jet, eps_grad);
  if (std::abs(v.norm() - 1.0) > 1e-10 || std::abs(v.dot(jet.gradient) / g) > 1e-8) {
    throw Error(ErrorCode::not_tangent, "direction is not a unit tangent vector");
  }
  return -quadratic_form(jet.hessian, v) / g;
}

double mean_curvature(const Jet2& jet, double eps_grad) {
  const int n = jet.dimension();
  const double g = checked_grad_norm(jet, eps_grad);
  const Vector normal = jet.gradient / g;
  return (quadratic_form(jet.hessian, normal) - laplacian(jet)) / ((n - 1) * g);
}

double mean_curvature_by_tangent_trace(const Jet2& jet, const LevelSetFrame& frame) {
  check_frame(jet, frame);
  const int n = jet.dimension();
  double sum = 0.0;
  for (int i = 0; i < n - 1; ++i) sum += quadratic_form(jet.hessian, frame.tangent_basis.col(i));
  return -sum / ((n - 1) * frame.grad_norm);
}

AveragingEstimate mean_curvature_by_averaging(const Jet2& jet, const LevelSetFrame& frame,
                                              int n_samples, std::uint64_t seed) {
  check_frame(jet, frame);
  if (n_samples < 2) throw Error(ErrorCode::invalid_argument, "need at least 2 samples");
  const int m = jet.dimension() - 1;

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  Vector coords(m);
  // Welford
  double mean = 0.0;
  double m2 = 0.0;
  for (int k = 0; k < n_samples; ++k) {
    for (int i = 0; i < m; ++i) coords[i] = gauss(rng);
    const Vector v = (frame.tangent_basis * coords).normalized();
    const double kappa = -quadratic_form(jet.hessian, v) / frame.grad_norm;
    const double delta = kappa - mean;
    mean += delta / (k + 1);
    m2 += delta * (kappa - mean);
  }
  const double variance = m2 / (n_samples - 1);
  return AveragingEstimate{mean, std::sqrt(variance / n_samples)};
}

double mean_curvature_by_circle_quadrature(const Jet2& jet, const LevelSetFrame& frame,
                                           int n_angles) {
  check_frame(jet, frame);
  if (jet.dimension() != 3) {
    throw Error(ErrorCode::invalid_argument, "circle quadrature is defined for n = 3 only");
  }
  if (n_angles < 3) throw Error(ErrorCode::invalid_argument, "need at least 3 angles");
  const Vector xi = frame.tangent_basis.col(0);
  const Vector eta = frame.tangent_basis.col(1);
  double sum = 0.0;
  for (int k = 0; k < n_angles; ++k) {
    const double theta = 2.0 * std::numbers::pi * k / n_angles;
    const Vector v = std::cos(theta) * xi + std::sin(theta) * eta;
    sum += -quadratic_form(jet.hessian, v) / frame.grad_norm;
  }
  return sum / n_angles;
}

}  // namespace gradflow
