#pragma once

#include "tubecalc/tangent_calculus.hpp"

#include <limits>
#include <memory>
#include <string>
#include <vector>

namespace tubecalc {

struct FitReport {
  double residual = 0.0;   // RMS of the relative fit residual on the ladder
  double condition = 0.0;  // of the column-scaled design matrix
};

// Function on the tube with a strong asymptotic expansion
//   φ(x) ~ Σ_{j>=m} a_j(ξ_x, ω_x) ρ_x^j.
// Evaluation receives both coordinate systems at once (TubePoint).
class ThickFunction {
 public:
  virtual ~ThickFunction() = default;

  virtual int leading_order() const = 0;
  virtual double support_radius() const { return std::numeric_limits<double>::infinity(); }
  // Radii where the radial profile changes character; used to split quadrature.
  virtual std::vector<double> breakpoints() const { return {}; }
  virtual double eval(const Submanifold& M, const TubePoint& p) const = 0;
  virtual bool has_analytic_coeffs() const { return false; }
  // a_m .. a_top at (ξ, ω). A shorter result means the higher orders are not
  // available; callers must not treat missing entries as zero.
  virtual std::vector<double> coefficients(const Submanifold& M, const Vec& xi, const Vec& omega,
                                           int top) const;
  virtual std::string describe() const = 0;

  // Least-squares fit along a geometric ρ-ladder, ignoring analytic data.
  std::vector<double> fit_coefficients(const Submanifold& M, const Vec& xi, const Vec& omega, int top,
                                       FitReport* report = nullptr) const;
};

using FunctionPtr = std::shared_ptr<const ThickFunction>;

struct ExpansionCoefficients {
  int m = 0;
  int J = 0;
  std::vector<double> values;  // a_m .. a_J
  double at(int j) const { return (j < m || j > J) ? 0.0 : values[j - m]; }
};

ExpansionCoefficients extract_coeffs(const Submanifold& M, const ThickFunction& phi, const Vec& xi,
                                     const Vec& omega, int J, FitReport* report = nullptr);

// a_0 .. a_J of a smooth field via normal derivatives; J <= 3.
std::vector<double> taylor_coeffs_smooth(const Submanifold& M, const ScalarField& phi, const Vec& xi,
                                         const Vec& omega, int J);

// Taylor coefficients 0..top of t ↦ f(ξ + t Σ ω_k n_k) for a field smooth across Σ,
// from a Chebyshev-node least-squares fit on [-half_width, half_width].
std::vector<double> line_taylor_fit(const Submanifold& M, const ScalarField& f, const Vec& xi,
                                    const Vec& omega, int top, double half_width);

// Expansion of ∂φ/∂x_i at (ξ, ω), orders m-1 .. top (possibly truncated when the
// parent expansion or the b coefficients run out).
ExpansionCoefficients expand_derivative(const Submanifold& M, const ThickFunction& phi, int i,
                                        const Vec& xi, const Vec& omega, int top);

struct StrongExpansionReport {
  bool pass = true;
  double min_slope = std::numeric_limits<double>::infinity();
  int samples = 0;
  std::string detail;
};

StrongExpansionReport validate_strong_expansion(const Submanifold& M, const FunctionPtr& phi,
                                                int samples, unsigned seed = 7);

// All multi-indices α of length d with |α| = order.
std::vector<std::vector<int>> multi_indices(int d, int order);

// Ambient finite-difference derivative of a thick function at a tube point.
double fd_derivative(const Submanifold& M, const ThickFunction& phi, const TubePoint& p, int i);

}  // namespace tubecalc
