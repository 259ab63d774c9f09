#include "tubecalc/catalog.hpp"
#include "tubecalc/expansion.hpp"
#include "tubecalc/shapes.hpp"

#include <gtest/gtest.h>

#include <cmath>

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

// 1/ρ + sin ρ; only evaluations are available, so coefficients come from the fit.
class InversePlusSine : public ThickFunction {
 public:
  int leading_order() const override { return -1; }
  double eval(const Submanifold&, const TubePoint& p) const override { return 1 / p.rho + std::sin(p.rho); }
  std::string describe() const override { return "1/rho+sin(rho)"; }
};

class RhoLogRho : public ThickFunction {
 public:
  int leading_order() const override { return 1; }
  double support_radius() const override { return 0.8; }
  double eval(const Submanifold&, const TubePoint& p) const override {
    return cutoff(p.rho, 0.8) * p.rho * std::log(p.rho);
  }
  std::string describe() const override { return "rho*log(rho)"; }
};

}  // namespace

TEST(ExtractCoeffs, InversePlusSineFromSamples) {
  const Shape S = make_sphere(3, 1.0);
  const InversePlusSine phi;
  const ExpansionCoefficients c = extract_coeffs(S.manifold, phi, v3(0, 0.6, 0.8), w1(1.0), 3);
  ASSERT_EQ(c.m, -1);
  const double want[] = {1.0, 0.0, 1.0, 0.0, -1.0 / 6.0};
  for (int j = -1; j <= 3; ++j) EXPECT_NEAR(c.at(j), want[j + 1], 1e-7) << "order " << j;
}

TEST(Coefficients, CoordinateOnSphere) {
  const Shape S = make_sphere(3, 1.0);
  const auto x1 = make_coordinate(0);
  for (double s : {1.0, -1.0}) {
    const ExpansionCoefficients c = extract_coeffs(S.manifold, *x1, v3(1, 0, 0), w1(s), 3);
    EXPECT_NEAR(c.at(0), 1.0, 1e-12);
    EXPECT_NEAR(c.at(1), s, 1e-12);
    EXPECT_NEAR(c.at(2), 0.0, 1e-12);
  }
}

TEST(Coefficients, SquaredHeightOnCircle) {
  const Shape C = make_circle3d(1.0);
  const auto phi = make_smooth_poly({{1.0, {0, 0, 2}}}, 0.8);
  const Vec w = w2(0.6, 0.8);
  const ExpansionCoefficients c = extract_coeffs(C.manifold, *phi, v3(1, 0, 0), w, 3);
  EXPECT_NEAR(c.at(0), 0.0, 1e-10);
  EXPECT_NEAR(c.at(1), 0.0, 1e-10);
  EXPECT_NEAR(c.at(2), 0.64, 1e-10);
  EXPECT_NEAR(c.at(3), 0.0, 1e-10);
  // Sample-only route agrees.
  const std::vector<double> f = phi->fit_coefficients(C.manifold, v3(1, 0, 0), w, 3);
  EXPECT_NEAR(f[2], 0.64, 1e-7);
}

TEST(Coefficients, Constant) {
  const Shape S = make_sphere(3, 1.0);
  const ExpansionCoefficients c = extract_coeffs(S.manifold, *make_constant(2.5), v3(0, 1, 0), w1(-1), 4);
  EXPECT_NEAR(c.at(0), 2.5, 1e-14);
  for (int j = 1; j <= 4; ++j) EXPECT_NEAR(c.at(j), 0.0, 1e-14);
}

TEST(DerivativeExpansion, DistanceGivesTheta) {
  const Shape S = make_sphere(3, 1.0);
  const Vec xi = v3(0.6, 0.8, 0);
  for (double s : {1.0, -1.0}) {
    const ExpansionCoefficients c = expand_derivative(S.manifold, *make_rho_power(1), 0, xi, w1(s), 3);
    EXPECT_NEAR(c.at(0), 0.6 * s, 1e-6);
    for (int j = 1; j <= 3; ++j) EXPECT_NEAR(c.at(j), 0.0, 1e-6);
  }
}

TEST(DerivativeExpansion, InverseDistanceOnCircle) {
  const Shape C = make_circle3d(1.0);
  const Vec w = w2(0.6, 0.8);
  const ExpansionCoefficients c = expand_derivative(C.manifold, *make_rho_power(-1), 2, v3(1, 0, 0), w, 1);
  EXPECT_EQ(c.m, -2);
  EXPECT_NEAR(c.at(-2), -0.8, 1e-8);
  // Cross-check against a fit of finite-difference derivatives.
  const auto fd = make_derivative(make_rho_power(-1), 2, CoefficientMode::Fitted);
  EXPECT_NEAR(fd->coefficients(C.manifold, v3(1, 0, 0), w, -2)[0], -0.8, 1e-5);
}

TEST(DerivativeExpansion, SmoothParentMatchesFiniteDifferences) {
  const Shape S = make_sphere(3, 1.0);
  const auto phi = make_smooth_poly({{1.0, {0, 0, 0}}, {1.0, {1, 1, 0}}, {0.5, {0, 0, 2}}}, 0.8);
  const Vec xi = v3(0.6, 0, 0.8);
  for (int i = 0; i < 3; ++i) {
    const auto ex = make_derivative(phi, i, CoefficientMode::Expansion);
    const auto fd = make_derivative(phi, i, CoefficientMode::Fitted);
    EXPECT_EQ(ex->leading_order(), -1);
    const auto a = ex->coefficients(S.manifold, xi, w1(1), 2);
    const auto b = fd->coefficients(S.manifold, xi, w1(1), 2);
    ASSERT_GE(a.size(), 4u);
    ASSERT_GE(b.size(), 4u);
    EXPECT_NEAR(a[0], 0.0, 1e-12);  // no ρ^{-1} term for a smooth parent
    for (std::size_t j = 0; j < 4; ++j) EXPECT_NEAR(a[j], b[j], 1e-5) << "axis " << i << " index " << j;
  }
}

TEST(StrongExpansion, Verdicts) {
  const Shape S = make_sphere(3, 1.0);
  EXPECT_TRUE(validate_strong_expansion(S.manifold, std::make_shared<InversePlusSine>(), 8).pass);
  EXPECT_TRUE(validate_strong_expansion(S.manifold, make_bump(0.8), 8).pass);
  EXPECT_FALSE(validate_strong_expansion(S.manifold, std::make_shared<RhoLogRho>(), 8).pass);
}

TEST(MultiIndices, CountsMatchBinomials) {
  EXPECT_EQ(multi_indices(2, 3).size(), 4u);
  EXPECT_EQ(multi_indices(3, 2).size(), 6u);
  EXPECT_EQ(multi_indices(1, 5).size(), 1u);
}
