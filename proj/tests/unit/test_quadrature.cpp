#include "tubecalc/quadrature.hpp"
#include "tubecalc/shapes.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace tubecalc;

namespace {

constexpr double kPi = std::numbers::pi;
const QuadratureLevels kFast{.sigma_level = 11, .fiber_level = 4, .radial_points = 16};

double integrate(const QuadratureRule& q, const std::function<double(const Vec&)>& f) {
  double s = 0.0;
  for (std::size_t k = 0; k < q.size(); ++k) s += q.weights[k] * f(q.nodes[k]);
  return s;
}

}  // namespace

TEST(SigmaRule, UnitSphereMoments) {
  const Shape S = make_sphere(3, 1.0);
  const QuadratureRule q = sigma_rule(S.manifold);
  EXPECT_NEAR(integrate(q, [](const Vec&) { return 1.0; }), 4 * kPi, 1e-12);
  EXPECT_NEAR(integrate(q, [](const Vec& x) { return x(0) * x(1); }), 0.0, 1e-12);
  EXPECT_NEAR(integrate(q, [](const Vec& x) { return x(0) * x(0); }), 4 * kPi / 3, 1e-12);
}

TEST(SigmaRule, CircleLength) {
  for (double R : {1.0, 2.5}) {
    const Shape C = make_circle3d(R);
    EXPECT_NEAR(integrate(sigma_rule(C.manifold), [](const Vec&) { return 1.0; }), 2 * kPi * R, 1e-12);
  }
}

TEST(FiberRule, Totals) {
  EXPECT_NEAR(fiber_rule(1, 1).measure_total, 2.0, 1e-14);
  const QuadratureRule f2 = fiber_rule(2, 4);
  EXPECT_NEAR(integrate(f2, [](const Vec& w) { return w(0) * w(0); }), kPi, 1e-12);
  EXPECT_NEAR(integrate(f2, [](const Vec& w) { return w(0); }), 0.0, 1e-12);
  EXPECT_NEAR(integrate(fiber_rule(3, 4), [](const Vec&) { return 1.0; }), 4 * kPi, 1e-12);
}

TEST(FiberRule, UnsupportedCodimension) {
  EXPECT_THROW(fiber_rule(4, 2), Error);
}

TEST(FpRadial, Examples) {
  EXPECT_NEAR(fp_radial(0, 0.5), 0.5, 1e-15);
  EXPECT_NEAR(fp_radial(-1, 0.1), std::log(0.1), 1e-12);
  EXPECT_NEAR(fp_radial(-2, 0.5), -2.0, 1e-12);
  EXPECT_NEAR(fp_radial(-0.5, 0.25), 1.0, 1e-12);
}

TEST(GaussLegendre, ExactForPolynomials) {
  const RadialRule r = gauss_legendre(6, 0.0, 2.0);
  double s = 0.0;
  for (std::size_t k = 0; k < r.nodes.size(); ++k) s += r.weights[k] * std::pow(r.nodes[k], 11);
  EXPECT_NEAR(s, std::pow(2.0, 12) / 12, 1e-9);
}

TEST(GradedRule, IntegrableSingularity) {
  const RadialRule r = graded_rule(16, 1.0);
  double s = 0.0;
  for (std::size_t k = 0; k < r.nodes.size(); ++k) s += r.weights[k] / std::sqrt(r.nodes[k]);
  // The innermost piece is the limiting error: 2·sqrt(its width).
  EXPECT_NEAR(s, 2.0, 1e-8);
}

TEST(IntegrateTube, ConstantOnCircle) {
  const Shape C = make_circle3d(1.0);
  const TubeIntegral t = integrate_tube(C.manifold, [](const TubePoint&) { return 1.0; }, 0.0, 1.0, kFast);
  EXPECT_NEAR(t.value, 2 * kPi * kPi, 1e-9);
  EXPECT_TRUE(t.converged);
}

TEST(IntegrateTube, ConstantOnSphere) {
  const Shape S = make_sphere(3, 1.0);
  const TubeIntegral t = integrate_tube(S.manifold, [](const TubePoint&) { return 1.0; }, 0.0, 0.5, kFast);
  EXPECT_NEAR(t.value, 4 * kPi, 1e-9);
}

TEST(IntegrateTube, OddFiberIntegrandVanishes) {
  for (const Shape& s : {make_sphere(3, 1.0), make_circle3d(1.0)}) {
    const TubeIntegral t =
        integrate_tube(s.manifold, [](const TubePoint& p) { return p.omega(0) * (1 + p.foot(0)); }, 0.0, 0.5, kFast);
    EXPECT_NEAR(t.value, 0.0, 1e-10) << s.manifold.name;
  }
}

TEST(UnitSphereArea, LowDimensions) {
  EXPECT_NEAR(unit_sphere_area(1), 2.0, 1e-15);
  EXPECT_NEAR(unit_sphere_area(2), 2 * kPi, 1e-14);
  EXPECT_NEAR(unit_sphere_area(3), 4 * kPi, 1e-14);
  EXPECT_NEAR(unit_sphere_area(4), 2 * kPi * kPi, 1e-13);
}
