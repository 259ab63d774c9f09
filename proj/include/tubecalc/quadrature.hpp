#pragma once

#include "tubecalc/geometry.hpp"

#include <functional>
#include <vector>

namespace tubecalc {

struct RadialRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

struct QuadratureLevels {
  int sigma_level = -1;  // -1: shape default
  int fiber_level = 4;
  int radial_points = 64;
};

// p-point Gauss–Legendre on [-1, 1].
RadialRule gauss_legendre(int p);
// Mapped to [a, b].
RadialRule gauss_legendre(int p, double a, double b);
// Composite rule on [0, b] with pieces shrinking geometrically toward 0; handles
// integrable power singularities at the origin.
RadialRule graded_rule(int points_per_piece, double b, int pieces = 48);

QuadratureRule sigma_rule(const Submanifold& M, int level = -1);
QuadratureRule fiber_rule(int d, int level);

double unit_sphere_area(int dim_plus_one);  // |S^{k-1}| for k = dim_plus_one

// F.p. ∫_0^η ρ^a dρ.
double fp_radial(double a, double eta);

struct TubeIntegral {
  double value = 0.0;
  double change_on_doubling = 0.0;
  bool converged = false;
};

using TubeIntegrand = std::function<double(const TubePoint&)>;

// ∭ f ρ^{d-1} dρ dω dσ(ξ) over ρ in [rho_a, rho_b], with the doubling gate.
TubeIntegral integrate_tube(const Submanifold& M, const TubeIntegrand& f, double rho_a, double rho_b,
                            const QuadratureLevels& levels = {});

// Single evaluation at the given levels, no gate.
double integrate_tube_once(const Submanifold& M, const TubeIntegrand& f, double rho_a, double rho_b,
                           const QuadratureLevels& levels);

}  // namespace tubecalc
