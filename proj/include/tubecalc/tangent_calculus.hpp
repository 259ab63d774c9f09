#pragma once

#include "tubecalc/geometry.hpp"

#include <functional>
#include <vector>

namespace tubecalc {

// a(ξ, ω) on Σ x S^{d-1}; functions of ξ alone ignore ω.
using SurfaceFunction = std::function<double(const Vec& xi, const Vec& omega)>;
// Vector-valued variant, used for whole coefficient lists at once.
using SurfaceVectorFunction = std::function<Eigen::VectorXd(const Vec& xi, const Vec& omega)>;
using ScalarField = std::function<double(const Vec& x)>;

struct SecondFundamentalData {
  Vec base_point;
  Mat mu;  // μ_ik = δn_k/δx_i
  double mean_curvature = 0.0;
};

double delta_derivative(const Submanifold& M, const SurfaceFunction& f, const Vec& xi, int i,
                        const Vec& omega = Vec());

// δ/δξ_l of a vector-valued surface function, for every axis l (column l).
Eigen::MatrixXd delta_gradient(const Submanifold& M, const SurfaceVectorFunction& f, const Vec& xi,
                               const Vec& omega);

double delta_derivative_omega(const Submanifold& M, const SurfaceFunction& a, const Vec& xi,
                              const Vec& omega, int k);

// δ/δω_k of a vector-valued function, column k.
Eigen::MatrixXd omega_gradient(const Submanifold& M, const SurfaceVectorFunction& a, const Vec& xi,
                               const Vec& omega);

double normal_derivative(const Submanifold& M, const ScalarField& phi, const Vec& xi,
                         const std::vector<int>& alpha);

Mat jacobian_pi(const Submanifold& M, const Vec& x);

double b_coeff(const Submanifold& M, int l, int i, int q, const Vec& xi, const Vec& omega);
// Full matrix (b_{l,i,q})_{l,i}; analytic when the shape supplies it.
Mat b_matrix(const Submanifold& M, int q, const Vec& xi, const Vec& omega);
// Always the finite-difference route, q <= 2.
Mat b_matrix_numerical(const Submanifold& M, int q, const Vec& xi, const Vec& omega);
// Largest q available for M.
int max_b_order(const Submanifold& M);

double theta(const Submanifold& M, const Vec& xi, const Vec& omega, int i);

SecondFundamentalData second_fundamental(const Submanifold& M, const Vec& xi);

// δN/δξ_l for every axis l, N = [n_1 .. n_d]; entry l is n x d.
std::vector<Mat> frame_derivatives(const Submanifold& M, const Vec& xi);

}  // namespace tubecalc
