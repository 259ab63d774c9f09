#pragma once

#include "tubecalc/expansion.hpp"

#include <string>
#include <vector>

namespace tubecalc {

// C^∞ radial cutoff: 1 on [0, s/2], 0 beyond s.
double cutoff(double rho, double s);

// Angular factor g(ξ, ω) used by Laurent terms and thick-delta densities.
struct AngularFactor {
  enum class Kind { One, Omega, Theta, Xi, Normal, Omega1SqMinusHalf } kind = Kind::One;
  int index = 0;
  double eval(const Vec& xi, const Vec& omega, const Mat& normals) const;
  std::string describe() const;
  static AngularFactor parse(const std::string& name);  // "one", "omega1", "theta2", ...
};

// Thick-delta density g as a surface function on Σ x S^{d-1}.
SurfaceFunction surface_function(const Submanifold& M, const AngularFactor& g);

struct LaurentTerm {
  double c = 0.0;
  AngularFactor factor;
};

// χ_s(ρ) Σ_t c_t g_t(ξ, ω) ρ^{m+t}.
FunctionPtr make_laurent(int m, std::vector<LaurentTerm> terms, double support);

struct Monomial {
  double c = 0.0;
  std::vector<int> powers;
};

// P(x) χ_s(ρ) for an ambient polynomial P.
FunctionPtr make_smooth_poly(std::vector<Monomial> poly, double support);
FunctionPtr make_bump(double support);
// n_{1,k}(ξ) χ_s(ρ): the test functions with expansion a_j = n_k δ_{j0}.
FunctionPtr make_normal_component(int k, double support);
// Ambient smooth field with Taylor coefficients from normal derivatives.
FunctionPtr make_smooth_field(ScalarField f, double support, std::string name);

// Multipliers (no compact support).
FunctionPtr make_constant(double c);
FunctionPtr make_theta(int i);
FunctionPtr make_coordinate(int i);
FunctionPtr make_rho_power(int p);
// ∂_i log J; analytic when the shape supplies it, generic otherwise.
FunctionPtr make_log_density_gradient(const Submanifold& M, int i);
// log J itself, generic route.
FunctionPtr make_log_density();

FunctionPtr make_product(FunctionPtr f, FunctionPtr g);
FunctionPtr make_scaled(double c, FunctionPtr f);

// Expansion: derivative expansion from the parent's coefficients.
// Fitted: one-sided fit of finite-difference values along the ray.
// SmoothAmbient: parent smooth across Σ; fixed-step differences fitted along the
// full normal line through ξ. Only valid when leading_order() >= 0.
enum class CoefficientMode { Expansion, Fitted, SmoothAmbient };
FunctionPtr make_derivative(FunctionPtr f, int i, CoefficientMode mode = CoefficientMode::Expansion);

}  // namespace tubecalc
