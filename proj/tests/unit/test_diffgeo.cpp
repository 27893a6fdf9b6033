#include <gtest/gtest.h>

#include <cmath>

#include "gradflow/diffgeo.hpp"
#include "gradflow/error.hpp"
#include "support.hpp"

namespace gradflow {
namespace {

using testing::vec;

Jet2 jet_with_gradient(const Vector& g) {
  const int n = static_cast<int>(g.size());
  return Jet2{Vector::Zero(n), 0.0, g, Matrix::Zero(n, n)};
}

/// Curvature comparisons are relative to the size of individual normal
/// curvatures, ||Hess||_F / ||grad||, so near-flat points do not blow up.
double curvature_rel(double a, double b, const Jet2& jet) {
  const double scale = jet.hessian.norm() / jet.gradient.norm();
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), scale, 1e-300});
}

TEST(FrameAt, AxisAlignedGradient) {
  const LevelSetFrame f = frame_at(jet_with_gradient(vec({0, 0, 5})));
  EXPECT_EQ(f.normal, vec({0, 0, 1}));
  EXPECT_DOUBLE_EQ(f.grad_norm, 5.0);
  ASSERT_EQ(f.tangent_basis.cols(), 2);
  EXPECT_NEAR(f.tangent_basis.row(2).norm(), 0.0, 1e-15);
  const Eigen::Vector3d t0 = f.tangent_basis.col(0);
  const Eigen::Vector3d t1 = f.tangent_basis.col(1);
  EXPECT_NEAR(std::abs(t0.cross(t1)[2]), 1.0, 1e-15);
}

TEST(FrameAt, PlanarGradient) {
  const LevelSetFrame f = frame_at(jet_with_gradient(vec({3, 4})));
  EXPECT_TRUE(f.normal.isApprox(vec({0.6, 0.8}), 1e-15));
  const Vector t = f.tangent_basis.col(0);
  const double sign = t[0] < 0 ? 1.0 : -1.0;
  EXPECT_LT((sign * t - vec({-0.8, 0.6})).norm(), 1e-15);
}

TEST(FrameAt, RejectsCriticalPoint) {
  try {
    frame_at(jet_with_gradient(vec({1e-15, 0, 0})), 1e-10);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::critical_point);
  }
}

TEST(FrameAt, OrthonormalForRandomGradients) {
  Rng rng(31);
  for (int n = 2; n <= 6; ++n) {
    for (int k = 0; k < 200; ++k) {
      Vector g(n);
      for (int i = 0; i < n; ++i) g[i] = rng.normal();
      if (k % 7 == 0) g = Vector::Unit(n, n - 1) * (k % 2 ? -1.0 : 1.0) + 1e-14 * g;
      const LevelSetFrame f = frame_at(jet_with_gradient(g));
      EXPECT_NEAR(f.normal.norm(), 1.0, 1e-12);
      const Matrix gram = f.tangent_basis.transpose() * f.tangent_basis;
      EXPECT_LT((gram - Matrix::Identity(n - 1, n - 1)).cwiseAbs().maxCoeff(), 1e-12);
      EXPECT_LT((f.tangent_basis.transpose() * f.normal).cwiseAbs().maxCoeff(), 1e-12);
    }
  }
}

TEST(DefaultEpsGrad, ScalesWithHessianAndPoint) {
  Jet2 jet = jet_with_gradient(vec({1, 0}));
  EXPECT_DOUBLE_EQ(default_eps_grad(jet), 1e-10);
  jet.hessian(0, 0) = 4.0;
  jet.point = vec({3, -1});
  EXPECT_DOUBLE_EQ(default_eps_grad(jet), 1e-10 * (1 + 4 * 3));
}

TEST(NormalSectionCurvature, SphereIsNegativeWithOutwardNormal) {
  const double r = 1.7;
  const Jet2 jet = eval_jet(testing::sphere_quadratic(3), vec({r, 0, 0}));
  EXPECT_NEAR(normal_section_curvature(jet, vec({0, 1, 0})), -1.0 / r, 1e-15);
}

TEST(NormalSectionCurvature, NewtonianBendsTowardInwardNormal) {
  const double r = 2.5;
  const Jet2 jet = eval_jet(make_newtonian(Vector::Zero(3), 3), vec({r, 0, 0}));
  EXPECT_NEAR(normal_section_curvature(jet, vec({0, 1, 0})), 1.0 / r, 1e-15);
}

TEST(NormalSectionCurvature, LinearIsFlat) {
  const Jet2 jet = eval_jet(make_linear(vec({1, 2, 2})), vec({0.3, 0.1, 9}));
  EXPECT_EQ(normal_section_curvature(jet, vec({0, 1, -1}).normalized()), 0.0);
}

TEST(NormalSectionCurvature, RejectsNonTangentDirections) {
  const Jet2 jet = eval_jet(testing::sphere_quadratic(3), vec({1, 0, 0}));
  for (const Vector& v : {vec({1, 0, 0}), vec({0, 2, 0})}) {
    try {
      normal_section_curvature(jet, v);
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::not_tangent);
    }
  }
}

TEST(NormalSectionCurvature, IsEvenInDirection) {
  Rng rng(32);
  for (int n = 2; n <= 5; ++n) {
    for (const auto& [name, field] : testing::catalog_fields(n, rng)) {
      const Jet2 jet = eval_jet(field, testing::random_point(n, rng));
      const LevelSetFrame f = frame_at(jet);
      Vector c(n - 1);
      for (int i = 0; i < n - 1; ++i) c[i] = rng.normal();
      const Vector v = (f.tangent_basis * c).normalized();
      EXPECT_EQ(normal_section_curvature(jet, v), normal_section_curvature(jet, -v)) << name;
    }
  }
}

TEST(MeanCurvature, Examples) {
  const double r = 1.3;
  EXPECT_NEAR(mean_curvature(eval_jet(testing::sphere_quadratic(3), vec({0, r, 0}))), -1.0 / r,
              1e-15);
  EXPECT_NEAR(mean_curvature(eval_jet(make_newtonian(Vector::Zero(3), 3), vec({0, 0, r}))),
              1.0 / r, 1e-15);
  EXPECT_EQ(mean_curvature(eval_jet(make_linear(vec({1, -1, 3})), vec({4, 5, 6}))), 0.0);
  EXPECT_THROW(mean_curvature(jet_with_gradient(vec({0, 0}))), Error);
}

TEST(MeanCurvature, SphereFixedPointInEveryDimension) {
  Rng rng(33);
  for (int n = 2; n <= 8; ++n) {
    Vector p(n);
    for (int i = 0; i < n; ++i) p[i] = rng.normal();
    const double r = p.norm();
    // Q = 2I, laplacian 2n, ||grad|| = 2r
    EXPECT_NEAR(mean_curvature(eval_jet(testing::sphere_quadratic(n), p)), -1.0 / r,
                1e-14 / r)
        << "n=" << n;
  }
}

TEST(MeanCurvatureByTangentTrace, Examples) {
  const double r = 0.8;
  const Jet2 sphere = eval_jet(testing::sphere_quadratic(3), vec({r, 0, 0}));
  EXPECT_NEAR(mean_curvature_by_tangent_trace(sphere, frame_at(sphere)), -1.0 / r, 1e-15);

  const double x = 1.6;
  const ScalarField saddle = make_harmonic_polynomial(2, {{1.0, {2, 0}}, {-1.0, {0, 2}}});
  const Jet2 s = eval_jet(saddle, vec({x, 0}));
  EXPECT_NEAR(mean_curvature_by_tangent_trace(s, frame_at(s)), 1.0 / x, 1e-15);

  const Jet2 flat = eval_jet(make_linear(vec({0, 1})), vec({2, 2}));
  EXPECT_EQ(mean_curvature_by_tangent_trace(flat, frame_at(flat)), 0.0);
}

TEST(MeanCurvatureByAveraging, SphereHasZeroVariance) {
  const Jet2 jet = eval_jet(testing::sphere_quadratic(3), vec({1, 0, 0}));
  const auto est = mean_curvature_by_averaging(jet, frame_at(jet), 10000, 7);
  EXPECT_NEAR(est.estimate, -1.0, 1e-12);
  EXPECT_LE(est.std_error, 1e-12);
}

TEST(MeanCurvatureByAveraging, SaddleInThreeDimensionsMatchesTangentTrace) {
  const ScalarField saddle =
      make_harmonic_polynomial(3, {{1.0, {2, 0, 0}}, {-1.0, {0, 2, 0}}});
  const Jet2 jet = eval_jet(saddle, vec({1, 0, 0}));
  const LevelSetFrame f = frame_at(jet);
  const auto est = mean_curvature_by_averaging(jet, f, 10000, 8);
  const double exact = mean_curvature_by_tangent_trace(jet, f);
  EXPECT_GT(est.std_error, 0.0);
  EXPECT_LE(std::abs(est.estimate - exact), 3.0 * est.std_error);
  EXPECT_NEAR(mean_curvature_by_circle_quadrature(jet, f), exact, 1e-15);
}

TEST(MeanCurvatureByAveraging, ZeroSphereInTwoDimensions) {
  const ScalarField saddle = make_harmonic_polynomial(2, {{1.0, {2, 0}}, {-1.0, {0, 2}}});
  const Jet2 jet = eval_jet(saddle, vec({1.2, 0.4}));
  const LevelSetFrame f = frame_at(jet);
  const auto est = mean_curvature_by_averaging(jet, f, 50, 9);
  EXPECT_NEAR(est.estimate, normal_section_curvature(jet, f.tangent_basis.col(0)), 1e-14);
  EXPECT_NEAR(est.std_error, 0.0, 1e-14);
}

TEST(MeanCurvatureByAveraging, Errors) {
  const Jet2 jet = eval_jet(testing::sphere_quadratic(4), vec({1, 0, 0, 0}));
  EXPECT_THROW(mean_curvature_by_averaging(jet, frame_at(jet), 1, 0), Error);
  EXPECT_THROW(mean_curvature_by_circle_quadrature(jet, frame_at(jet)), Error);
}

TEST(MeanCurvatureProperties, RoutesAgreeAcrossCatalog) {
  Rng rng(34);
  std::uint64_t seed = 100;
  for (int n = 2; n <= 5; ++n) {
    for (const auto& [name, field] : testing::catalog_fields(n, rng)) {
      for (int k = 0; k < 50; ++k) {
        const Jet2 jet = eval_jet(field, testing::random_point(n, rng));
        const LevelSetFrame f = frame_at(jet);
        const double h = mean_curvature(jet);
        EXPECT_LE(curvature_rel(h, mean_curvature_by_tangent_trace(jet, f), jet), 1e-10)
            << name << " n=" << n;
        if (n == 3) {
          EXPECT_LE(curvature_rel(h, mean_curvature_by_circle_quadrature(jet, f), jet), 1e-10)
              << name;
        }
      }
      const Jet2 jet = eval_jet(field, testing::random_point(n, rng));
      const auto est = mean_curvature_by_averaging(jet, frame_at(jet), 2000, seed++);
      EXPECT_LE(std::abs(est.estimate - mean_curvature(jet)), 3.0 * est.std_error + 1e-12)
          << name << " n=" << n;
    }
  }
}

TEST(MeanCurvatureProperties, RotationInvariance) {
  Rng rng(35);
  for (int n = 2; n <= 5; ++n) {
    for (int k = 0; k < 20; ++k) {
      Matrix a(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) a(i, j) = rng.normal();
      a = 0.5 * (a + a.transpose()).eval();
      Vector b(n);
      for (int i = 0; i < n; ++i) b[i] = rng.normal();
      const Matrix rot = testing::random_rotation(n, rng);

      const ScalarField f = testing::quadratic_form_field(a, b);
      const ScalarField g = testing::quadratic_form_field(rot * a * rot.transpose(), rot * b);
      const Vector p = testing::random_point(n, rng, -1.0, 1.0);
      const Jet2 jf = eval_jet(f, p);
      const Jet2 jg = eval_jet(g, rot * p);
      EXPECT_LE(curvature_rel(mean_curvature(jf), mean_curvature(jg), jf), 1e-10) << "n=" << n;
    }
  }
}

}  // namespace
}  // namespace gradflow
