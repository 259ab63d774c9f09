#include "tubecalc/geometry.hpp"
#include "tubecalc/quadrature.hpp"
#include "tubecalc/shapes.hpp"
#include "tubecalc/tangent_calculus.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace tubecalc;

namespace {

constexpr double kPi = std::numbers::pi;

Vec v3(double a, double b, double c) {
  Vec x(3);
  x << a, b, c;
  return x;
}

}  // namespace

TEST(DeltaDerivativeOracle, Values) {
  EXPECT_NEAR(sphere_delta_derivative_oracle(3, 1.0, 0, 0, 0), -8 * kPi / 3, 1e-14);
  EXPECT_NEAR(sphere_delta_derivative_oracle(3, 2.0, 1, 1, 2), -4 * kPi / 3, 1e-14);
  for (int j = -1; j <= 3; ++j) EXPECT_EQ(sphere_delta_derivative_oracle(3, 1.5, 0, 2, j), 0.0);
  EXPECT_EQ(sphere_delta_derivative_oracle(3, 1.0, 0, 0, 1), 0.0);
  EXPECT_EQ(sphere_delta_derivative_oracle(3, 1.0, 0, 0, -1), 0.0);
}

TEST(Sphere, ClosedForms) {
  const Shape S = make_sphere(3, 1.0);
  EXPECT_LT((S.oracle.projection(v3(3, 4, 0)) - v3(0.6, 0.8, 0)).norm(), 1e-15);
  EXPECT_NEAR(S.oracle.mean_curvature(v3(0, 0, 1)), 1.0, 1e-15);
  const Shape S2 = make_sphere(3, 2.0);
  Mat want = Mat::Zero(3, 3);
  want(1, 1) = want(2, 2) = 0.5;
  EXPECT_LT((S2.oracle.mu(v3(2, 0, 0)) - want).norm(), 1e-15);
  EXPECT_DOUBLE_EQ(S2.manifold.tube_radius, 2.0);
}

TEST(Circle, FrameLengthProjection) {
  const double R = 1.5;
  const Shape C = make_circle3d(R);
  const Mat N = C.oracle.frame(v3(R, 0, 0));
  EXPECT_LT((N.col(0) - v3(1, 0, 0)).norm(), 1e-15);
  EXPECT_LT((N.col(1) - v3(0, 0, 1)).norm(), 1e-15);
  EXPECT_NEAR(sigma_rule(C.manifold).measure_total, 2 * kPi * R, 1e-12);
  EXPECT_LT((C.oracle.projection(v3(R + 0.1, 0, 0.2)) - v3(R, 0, 0)).norm(), 1e-15);
}

// Every closed-form callback agrees with the generic numerical path.
TEST(Oracle, MatchesGenericPathAtRandomPoints) {
  std::mt19937 rng(17);
  std::normal_distribution<double> g;
  for (const Shape& s : {make_sphere(3, 1.0), make_sphere(3, 2.0), make_circle3d(1.0)}) {
    Submanifold M = s.manifold;
    M.closed_form_projection = nullptr;
    M.analytic_b = nullptr;
    for (int k = 0; k < 50; ++k) {
      const Vec xi = s.oracle.projection(v3(g(rng), g(rng), g(rng)));
      Vec w = Vec::NullaryExpr(M.codim, [&] { return g(rng); });
      w.normalize();
      const Vec x = embed(s.oracle.frame(xi), xi, w, 0.3 * M.tube_radius);
      EXPECT_LT((project(M, x) - s.oracle.projection(x)).norm(), 1e-6);
      EXPECT_LT((frame(M, xi).normals - s.oracle.frame(xi)).norm(), 1e-6);
      EXPECT_LT((jacobian_pi(M, x) - s.oracle.jacobian_pi(x)).norm(), 1e-6);
      EXPECT_LT((b_matrix(M, 1, xi, w) - s.oracle.b(1, xi, w)).norm(), 1e-6);
      if (s.oracle.mean_curvature) {
        const SecondFundamentalData sf = second_fundamental(M, xi);
        EXPECT_NEAR(sf.mean_curvature, s.oracle.mean_curvature(xi), 1e-6);
        EXPECT_LT((sf.mu - s.oracle.mu(xi)).norm(), 1e-6);
      }
    }
  }
}
