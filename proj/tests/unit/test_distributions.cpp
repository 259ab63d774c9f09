#include "tubecalc/catalog.hpp"
#include "tubecalc/distributions.hpp"
#include "tubecalc/shapes.hpp"

#include <gtest/gtest.h>

#include <Eigen/Dense>

#include <cmath>
#include <numbers>

using namespace tubecalc;

namespace {

constexpr double kPi = std::numbers::pi;

PairOptions fast_options(int sigma_level) {
  PairOptions o;
  o.levels.sigma_level = sigma_level;
  o.levels.radial_points = 32;
  return o;
}

AngularFactor factor(const std::string& name) { return AngularFactor::parse(name); }

template <class T>
const T* node_as(const DistPtr& d) {
  return std::get_if<T>(&d->node);
}

}  // namespace

TEST(ThickDelta, CircleLength) {
  const Shape C = make_circle3d(1.0);
  const PairingResult r = pair(C.manifold, thick_delta(factor("one"), 0), make_bump(0.8), fast_options(15));
  EXPECT_NEAR(r.value, 2 * kPi, 1e-10);
}

TEST(ThickDelta, FiberWeightedDensity) {
  const Shape C = make_circle3d(1.0);
  const auto phi = make_laurent(0, {{1.0, factor("omega1")}}, 0.8);
  EXPECT_NEAR(pair(C.manifold, thick_delta(factor("omega1"), 0), phi, fast_options(15)).value, kPi, 1e-10);
}

// Oracle: fit the truncated integral over ρ > ε against {1/ε, ln ε, 1}.
TEST(PfRhoLambda, InverseSquareOnCircleAgainstCutoffFit) {
  const Shape C = make_circle3d(1.0);
  const double s = 0.8;
  const auto bump = make_bump(s);
  auto truncated = [&](double eps) {
    // Radial profile only; the bump does not depend on (ξ, ω). Integrate in t = ln ρ.
    const RadialRule r = gauss_legendre(200, std::log(eps), std::log(s));
    double v = 0.0;
    for (std::size_t k = 0; k < r.nodes.size(); ++k) v += r.weights[k] * cutoff(std::exp(r.nodes[k]), s);
    return (2 * kPi) * (2 * kPi) * v;  // |Σ|·|S^1|
  };
  const double eps[] = {1e-2, 3e-3, 1e-3, 3e-4, 1e-4};
  Eigen::MatrixXd A(5, 3);
  Eigen::VectorXd b(5);
  for (int k = 0; k < 5; ++k) {
    A(k, 0) = 1 / eps[k];
    A(k, 1) = std::log(eps[k]);
    A(k, 2) = 1.0;
    b(k) = truncated(eps[k]);
  }
  const Eigen::VectorXd c = A.colPivHouseholderQr().solve(b);
  const PairingResult r = pair(C.manifold, pf_rho_lambda(-2), bump, fast_options(15));
  EXPECT_NEAR(r.value, c(2), 1e-6);
  EXPECT_TRUE(r.eta_check_pass);
}

TEST(PfRhoLambda, EtaIndependenceProperty) {
  const Shape S = make_sphere(3, 1.0);
  const Shape C = make_circle3d(1.0);
  const auto L = make_laurent(-1, {{1.0, factor("xi1")}, {0.5, factor("theta2")}, {0.25, factor("one")}}, 0.7);
  for (double lambda : {-2.5, -2.0, -1.0, -0.5, 0.0, 1.5}) {
    for (const Shape* s : {&S, &C}) {
      const PairingResult r = pair(s->manifold, pf_rho_lambda(lambda), L, fast_options(9));
      EXPECT_TRUE(r.has_eta);
      EXPECT_LT(std::abs(r.value - r.value_eta_half), 1e-7 * (1 + std::abs(r.value)))
          << s->manifold.name << " lambda " << lambda;
    }
  }
}

TEST(Pairing, SupportExceedingTubeIsRejected) {
  const Shape S = make_sphere(3, 1.0);
  try {
    pair(S.manifold, pf_rho_lambda(0), make_bump(1.5), fast_options(9));
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::SupportExceedsTube);
  }
}

TEST(Derivative, NonIntegerPowerHasNoDeltaTerm) {
  const Shape S = make_sphere(3, 1.0);
  const DistPtr D = derivative(S.manifold, pf_rho_lambda(0.5), 0);
  const auto* C = node_as<LinearCombination>(D);
  ASSERT_NE(C, nullptr);
  bool lowered = false;
  for (const auto& [c, T] : C->terms) {
    EXPECT_EQ(node_as<ThickDelta>(T), nullptr);
    if (const auto* m = node_as<Multiplied>(T)) {
      if (const auto* p = node_as<PfRhoLambda>(m->inner); p && std::abs(p->lambda + 0.5) < 1e-15) {
        EXPECT_DOUBLE_EQ(c, 0.5);
        lowered = true;
      }
    }
  }
  EXPECT_TRUE(lowered);
}

TEST(Derivative, IntegerPowerProducesThickDelta) {
  const Shape C = make_circle3d(1.0);
  const DistPtr D = derivative(C.manifold, pf_rho_lambda(0), 2);
  const auto* L = node_as<LinearCombination>(D);
  ASSERT_NE(L, nullptr);
  int deltas = 0;
  for (const auto& [c, T] : L->terms) {
    if (const auto* d = node_as<ThickDelta>(T)) {
      ++deltas;
      EXPECT_EQ(d->degree, -1);
      EXPECT_EQ(d->g.kind, AngularFactor::Kind::Theta);
      EXPECT_EQ(d->g.index, 2);
      EXPECT_NEAR(c, 2 * kPi, 1e-14);
    }
    if (const auto* m = node_as<Multiplied>(T)) {
      const auto* p = node_as<PfRhoLambda>(m->inner);
      EXPECT_FALSE(p && std::abs(p->lambda + 1) < 1e-15) << "λ = 0 must not carry a lowered power";
    }
  }
  EXPECT_EQ(deltas, 1);
}

TEST(Derivative, SphereDeltaAgainstClosedForm) {
  const Shape S = make_sphere(3, 1.0);
  const DistPtr D = derivative(S.manifold, thick_delta(factor("one"), 0), 0);
  const double want = sphere_delta_derivative_oracle(3, 1.0, 0, 0, 0);
  EXPECT_NEAR(want, -8 * kPi / 3, 1e-14);
  for (int k = 0; k < 3; ++k) {
    const double v = pair(S.manifold, D, make_normal_component(k, 0.8), fast_options(11)).value;
    EXPECT_NEAR(v, k == 0 ? want : 0.0, 1e-6) << "k = " << k;
  }
}

TEST(Projection, ThickDeltaExamples) {
  const Shape C = make_circle3d(1.0);
  const ScalarField one = [](const Vec&) { return 1.0; };
  const ScalarField field = [](const Vec& x) { return std::exp(0.3 * x(0)) * (1 + x(2)); };
  const PairOptions o = fast_options(15);
  EXPECT_NEAR(project_pair(C.manifold, thick_delta(factor("one"), 0), one, 0.8, o).value, 2 * kPi, 1e-9);
  EXPECT_NEAR(project_pair(C.manifold, thick_delta(factor("omega1"), 0), field, 0.8, o).value, 0.0, 1e-9);
  EXPECT_NEAR(project_pair(C.manifold, thick_delta(factor("one"), -1), field, 0.8, o).value, 0.0, 1e-12);
}

TEST(Residue, Examples) {
  const Shape C = make_circle3d(1.0);
  const ResidueResult rc = residue(C.manifold, -2, make_bump(0.8), fast_options(15));
  EXPECT_NEAR(rc.value, 4 * kPi * kPi, 1e-9);
  EXPECT_NEAR(rc.lambda_limit, rc.value, 1e-3 * rc.value);

  const Shape S = make_sphere(3, 1.0);
  const ResidueResult rs = residue(S.manifold, -1, make_bump(0.8), fast_options(11));
  // ∬ a_0 over S² x S^0.
  EXPECT_NEAR(rs.value, 8 * kPi, 1e-9);
  EXPECT_NEAR(rs.lambda_limit, rs.value, 1e-3 * rs.value);

  // -k-d below the leading order: nothing to pick up.
  const auto rho2 = make_laurent(2, {{1.0, factor("one")}}, 0.8);
  EXPECT_NEAR(residue(S.manifold, -2, rho2, fast_options(11)).value, 0.0, 1e-14);
}

TEST(Leibniz, UnitMultiplierReducesToDerivative) {
  const Shape S = make_sphere(3, 1.0);
  const auto phi = make_smooth_poly({{1.0, {0, 0, 0}}, {0.5, {1, 1, 0}}}, 0.8);
  const DistPtr T = pf_rho_lambda(-0.5);
  const PairOptions o = fast_options(9);
  for (int i = 0; i < 3; ++i) {
    const double a = pair(S.manifold, leibniz(S.manifold, make_constant(1.0), T, i), phi, o).value;
    const double b = pair(S.manifold, derivative(S.manifold, T, i), phi, o).value;
    EXPECT_NEAR(a, b, 1e-9 * (1 + std::abs(b)));
  }
}

// ∂(x_1 Pf(1)) computed through the Leibniz rule and through the Pf(ψ) rule.
TEST(Leibniz, CoordinateMultiplierMatchesPfPsiRule) {
  const Shape S = make_sphere(3, 1.0);
  const auto x1 = make_coordinate(0);
  const PairOptions o = fast_options(9);
  const FunctionPtr tests[] = {
      make_bump(0.7),
      make_smooth_poly({{1.0, {0, 1, 0}}, {0.3, {0, 0, 2}}}, 0.8),
      make_laurent(0, {{1.0, factor("one")}, {0.5, factor("theta1")}}, 0.7),
  };
  for (int i = 0; i < 3; ++i) {
    for (const auto& phi : tests) {
      const double a = pair(S.manifold, leibniz(S.manifold, x1, pf_rho_lambda(0), i), phi, o).value;
      const double b = pair(S.manifold, derivative(S.manifold, pf_psi(x1), i), phi, o).value;
      EXPECT_NEAR(a, b, 1e-6 * (1 + std::abs(b))) << "axis " << i << " " << phi->describe();
    }
  }
}

// Adjoint property: ⟨∂T, φ⟩ = -⟨T, ∂φ⟩ for a smooth φ.
TEST(Derivative, AdjointProperty) {
  const Shape C = make_circle3d(1.0);
  const auto phi = make_smooth_poly({{1.0, {0, 0, 0}}, {0.5, {1, 0, 1}}, {0.2, {0, 2, 0}}}, 0.8);
  const PairOptions o = fast_options(11);
  for (double lambda : {0.5, 0.0}) {
    for (int i = 0; i < 3; ++i) {
      const DistPtr T = pf_rho_lambda(lambda);
      const double lhs = pair(C.manifold, derivative(C.manifold, T, i), phi, o).value;
      const double rhs =
          -pair(C.manifold, T, make_derivative(phi, i, CoefficientMode::SmoothAmbient), o).value;
      EXPECT_NEAR(lhs, rhs, 1e-6 * (1 + std::abs(rhs))) << "lambda " << lambda << " axis " << i;
    }
  }
}
