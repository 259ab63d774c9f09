#include "tubecalc/shapes.hpp"
#include "tubecalc/tangent_calculus.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace tubecalc;

namespace {

Vec v3(double a, double b, double c) {
  Vec x(3);
  x << a, b, c;
  return x;
}
Vec w1(double s) {
  Vec w(1);
  w << s;
  return w;
}
Vec w2(double a, double b) {
  Vec w(2);
  w << a, b;
  return w;
}

}  // namespace

TEST(DeltaDerivative, CoordinateOnSphere) {
  const Shape S = make_sphere(3, 1.0);
  const SurfaceFunction f = [](const Vec& xi, const Vec&) { return xi(0); };
  EXPECT_NEAR(delta_derivative(S.manifold, f, v3(0, 0, 1), 0), 1.0, 1e-8);
  EXPECT_NEAR(delta_derivative(S.manifold, f, v3(1, 0, 0), 0), 0.0, 1e-8);
}

TEST(DeltaDerivative, ConstantIsZero) {
  const Shape C = make_circle3d(1.0);
  const SurfaceFunction f = [](const Vec&, const Vec&) { return 2.5; };
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(delta_derivative(C.manifold, f, v3(0.6, 0.8, 0), i), 0.0, 1e-12);
}

TEST(OmegaDerivative, CircleExamples) {
  const Shape C = make_circle3d(1.0);
  const SurfaceFunction a = [](const Vec&, const Vec& w) { return w(0); };
  EXPECT_NEAR(delta_derivative_omega(C.manifold, a, v3(1, 0, 0), w2(0, 1), 0), 1.0, 1e-8);
  EXPECT_NEAR(delta_derivative_omega(C.manifold, a, v3(1, 0, 0), w2(1, 0), 0), 0.0, 1e-8);
  const SurfaceFunction b = [](const Vec& xi, const Vec&) { return xi(1); };
  EXPECT_NEAR(delta_derivative_omega(C.manifold, b, v3(1, 0, 0), w2(0.6, 0.8), 1), 0.0, 1e-12);
}

TEST(NormalDerivative, Examples) {
  const Shape S = make_sphere(3, 1.0);
  const Shape C = make_circle3d(1.0);
  EXPECT_NEAR(normal_derivative(S.manifold, [](const Vec& x) { return x(0) * x(0); }, v3(1, 0, 0), {2}),
              2.0, 1e-6);
  EXPECT_NEAR(normal_derivative(C.manifold, [](const Vec& x) { return x(2); }, v3(1, 0, 0), {0, 1}), 1.0,
              1e-8);
  EXPECT_NEAR(normal_derivative(S.manifold, [](const Vec& x) { return std::exp(x(0)); }, v3(1, 0, 0), {1}),
              std::exp(1.0), 1e-6);
}

TEST(JacobianPi, SphereOffAndOnManifold) {
  const Shape S = make_sphere(3, 1.0);
  Mat want = Mat::Zero(3, 3);
  want(1, 1) = want(2, 2) = 0.5;
  EXPECT_LT((jacobian_pi(S.manifold, v3(2, 0, 0)) - want).norm(), 1e-7);
  want(1, 1) = want(2, 2) = 1.0;
  EXPECT_LT((jacobian_pi(S.manifold, v3(1, 0, 0)) - want).norm(), 1e-7);
}

TEST(JacobianPi, Circle) {
  const Shape C = make_circle3d(1.0);
  const Mat J = jacobian_pi(C.manifold, v3(1.5, 0, 0));
  EXPECT_NEAR(J(1, 1), 2.0 / 3.0, 1e-7);
  EXPECT_NEAR(J(0, 0), 0.0, 1e-7);
  EXPECT_NEAR(J(2, 2), 0.0, 1e-7);
}

TEST(BCoefficients, SphereFormula) {
  const Shape S1 = make_sphere(3, 1.0);
  for (double s : {1.0, -1.0}) {
    EXPECT_NEAR(b_coeff(S1.manifold, 0, 0, 2, v3(0, 0, 1), w1(s)), 1.0, 1e-12);
    for (int q = 1; q <= 3; ++q) EXPECT_NEAR(b_coeff(S1.manifold, 2, 2, q, v3(0, 0, 1), w1(s)), 0.0, 1e-12);
  }
  const Shape S2 = make_sphere(3, 2.0);
  EXPECT_NEAR(b_coeff(S2.manifold, 1, 1, 1, v3(2, 0, 0), w1(1.0)), -0.5, 1e-12);
}

TEST(BCoefficients, NumericalMatchesClosedForm) {
  std::mt19937 rng(5);
  std::normal_distribution<double> g;
  for (const Shape& s : {make_sphere(3, 1.0), make_sphere(3, 2.0), make_circle3d(1.0)}) {
    const Submanifold& M = s.manifold;
    for (int k = 0; k < 10; ++k) {
      const Vec xi = s.oracle.projection(v3(g(rng), g(rng), g(rng)));
      Vec w = Vec::NullaryExpr(M.codim, [&] { return g(rng); });
      w.normalize();
      for (int q = 1; q <= 2; ++q) {
        const Mat exact = s.oracle.b(q, xi, w);
        EXPECT_LT((b_matrix_numerical(M, q, xi, w) - exact).norm(), 1e-5 * std::max(1.0, exact.norm()));
      }
    }
  }
}

TEST(Theta, Examples) {
  const Shape S = make_sphere(3, 1.0);
  EXPECT_NEAR(theta(S.manifold, v3(0, 1, 0), w1(1), 1), 1.0, 1e-14);
  EXPECT_NEAR(theta(S.manifold, v3(0, 1, 0), w1(-1), 1), -1.0, 1e-14);
  const Shape C = make_circle3d(1.0);
  EXPECT_NEAR(theta(C.manifold, v3(1, 0, 0), w2(0, 1), 2), 1.0, 1e-14);
}

TEST(SecondFundamental, SphereRadiusTwo) {
  const Shape S = make_sphere(3, 2.0);
  const SecondFundamentalData sf = second_fundamental(S.manifold, v3(2, 0, 0));
  Mat want = Mat::Zero(3, 3);
  want(1, 1) = want(2, 2) = 0.5;
  EXPECT_LT((sf.mu - want).norm(), 1e-6);
  EXPECT_NEAR(sf.mean_curvature, 0.5, 1e-6);
}

TEST(SecondFundamental, MeanCurvatureScalesWithRadius) {
  EXPECT_NEAR(second_fundamental(make_sphere(3, 1.0).manifold, v3(0.6, 0, 0.8)).mean_curvature, 1.0, 1e-6);
  EXPECT_NEAR(second_fundamental(make_sphere(3, 100.0).manifold, v3(0, 100, 0)).mean_curvature, 0.01, 1e-6);
}
