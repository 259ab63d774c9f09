#pragma once

#include "tubecalc/types.hpp"

#include <functional>
#include <string>
#include <vector>

namespace tubecalc {

// Nodes and positive weights. Nodes live on Σ, on the fiber sphere, or on a line.
struct QuadratureRule {
  std::vector<Vec> nodes;
  std::vector<double> weights;
  double measure_total = 0.0;
  std::size_t size() const { return weights.size(); }
};

// Closed submanifold given as the zero set of F: R^n -> R^d.
// The optional hooks are filled in by the shapes catalog; every consumer has a
// numerical fallback when a hook is empty.
struct Submanifold {
  std::string name = "generic";
  int ambient_dim = 0;
  int codim = 0;
  double tube_radius = 0.0;

  std::function<Vec(const Vec&)> constraint;
  std::function<Mat(const Vec&)> constraint_jacobian;  // d x n; empty -> finite differences
  std::function<Vec(const Vec&)> closed_form_projection;

  // (b_{l,i,q})_{l,i} at (ξ, ω).
  std::function<Mat(int q, const Vec& xi, const Vec& omega)> analytic_b;
  // ∂_i log J where dx = J ρ^{d-1} dρ dω dσ(ξ); value and ρ-series coefficients 0..top.
  std::function<double(const Vec& xi, const Vec& omega, double rho, int axis)> log_density_gradient;
  std::function<std::vector<double>(const Vec& xi, const Vec& omega, int axis, int top)>
      log_density_gradient_coeffs;

  std::function<QuadratureRule(int level)> surface_rule;
  int default_sigma_level = 0;
};

struct NormalFrame {
  Vec base_point;
  Mat normals;  // n x d, column k is n_k(ξ)
  int codim() const { return static_cast<int>(normals.cols()); }
  Vec n(int k) const { return normals.col(k); }
};

struct TubularCoordinates {
  Vec foot;
  Vec fiber_dir;  // ω, coordinates with respect to the frame at the foot
  double dist = 0.0;
};

// Everything known about a point of the tube, in both coordinate systems.
struct TubePoint {
  Vec x;
  Vec foot;
  Vec omega;
  double rho = 0.0;
  Mat normals;
};

Mat constraint_jacobian(const Submanifold& M, const Vec& x);

Vec project(const Submanifold& M, const Vec& x);

NormalFrame frame(const Submanifold& M, const Vec& xi);

TubularCoordinates tube_coords(const Submanifold& M, const Vec& x);

Vec embed(const Submanifold& M, const TubularCoordinates& c);
Vec embed(const Mat& normals, const Vec& foot, const Vec& omega, double rho);

Vec grad_rho(const Submanifold& M, const Vec& x);

// Tube point from an ambient position (projection + frame).
TubePoint locate(const Submanifold& M, const Vec& x);
// Tube point from tube coordinates with a frame already at hand.
TubePoint make_tube_point(const Mat& normals, const Vec& foot, const Vec& omega, double rho);

// Orthonormal basis of T_ξΣ as columns (n x (n-d)).
Mat tangent_basis(const Mat& normals);

}  // namespace tubecalc
