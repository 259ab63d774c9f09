#include "tubecalc/shapes.hpp"

#include "tubecalc/quadrature.hpp"

#include <cmath>
#include <numbers>

namespace tubecalc {

namespace {

constexpr double kPi = std::numbers::pi;

QuadratureRule sphere2_rule(double r, int level) {
  // Polar Gauss–Legendre in z = cos(polar angle) times uniform azimuth; exact
  // for spherical polynomials of degree <= 2*level+1.
  const int p = level + 1, N = 2 * level + 2;
  RadialRule gl = gauss_legendre(p);
  QuadratureRule q;
  for (int a = 0; a < p; ++a) {
    const double z = gl.nodes[a], s = std::sqrt(1.0 - z * z);
    for (int k = 0; k < N; ++k) {
      const double t = 2.0 * kPi * (k + 0.5) / N;
      Vec x(3);
      x << r * s * std::cos(t), r * s * std::sin(t), r * z;
      q.nodes.push_back(x);
      q.weights.push_back(r * r * gl.weights[a] * 2.0 * kPi / N);
    }
  }
  q.measure_total = 4.0 * kPi * r * r;
  return q;
}

QuadratureRule circle_rule(double R, int level, int n) {
  const int N = 2 * level + 2;
  QuadratureRule q;
  for (int k = 0; k < N; ++k) {
    const double t = 2.0 * kPi * k / N;
    Vec x = Vec::Zero(n);
    x(0) = R * std::cos(t);
    x(1) = R * std::sin(t);
    q.nodes.push_back(x);
    q.weights.push_back(2.0 * kPi * R / N);
  }
  q.measure_total = 2.0 * kPi * R;
  return q;
}

}  // namespace

Shape make_sphere(int n, double r) {
  if (n < 2 || n > kMaxDim || !(r > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "sphere needs 2 <= n <= 8 and r > 0");
  }
  Shape s;
  Submanifold& M = s.manifold;
  M.name = "sphere";
  M.ambient_dim = n;
  M.codim = 1;
  M.tube_radius = r;
  M.constraint = [r](const Vec& x) {
    Vec F(1);
    F(0) = x.squaredNorm() - r * r;
    return F;
  };
  M.constraint_jacobian = [](const Vec& x) { return Mat(2.0 * x.transpose()); };
  M.closed_form_projection = [r](const Vec& x) { return Vec(r * x / x.norm()); };
  auto b = [n, r](int q, const Vec& xi, const Vec& omega) {
    Mat P = Mat::Identity(n, n) - xi * xi.transpose() / (r * r);
    return Mat(P * std::pow(-omega(0) / r, q));
  };
  M.analytic_b = b;
  M.log_density_gradient = [n, r](const Vec& xi, const Vec& omega, double rho, int i) {
    return (n - 1) * (xi(i) / r) / (r + omega(0) * rho);
  };
  M.log_density_gradient_coeffs = [n, r](const Vec& xi, const Vec& omega, int i, int top) {
    std::vector<double> c(top + 1);
    double t = (n - 1) * xi(i) / (r * r);
    for (int q = 0; q <= top; ++q, t *= -omega(0) / r) c[q] = t;
    return c;
  };
  if (n == 3) {
    M.surface_rule = [r](int level) { return sphere2_rule(r, level); };
    M.default_sigma_level = 31;
  } else if (n == 2) {
    M.surface_rule = [r](int level) { return circle_rule(r, level, 2); };
    M.default_sigma_level = 127;
  }

  ShapeOracle& o = s.oracle;
  o.shape_id = "sphere";
  o.projection = M.closed_form_projection;
  o.frame = [r](const Vec& xi) { return Mat(xi / r); };
  o.jacobian_pi = [n, r](const Vec& x) {
    const Vec xi = r * x / x.norm();
    return Mat((r / x.norm()) * (Mat::Identity(n, n) - xi * xi.transpose() / (r * r)));
  };
  o.b = b;
  o.mu = [n, r](const Vec& xi) {
    const Vec nn = xi / r;
    return Mat((Mat::Identity(n, n) - nn * nn.transpose()) / r);
  };
  o.mean_curvature = [r](const Vec&) { return 1.0 / r; };
  const double area = unit_sphere_area(n);
  o.table["unit_sphere_area"] = area;
  o.table["surface_area"] = area * std::pow(r, n - 1);
  o.table["integral_mean_curvature"] = std::pow(r, n - 2) * area;
  return s;
}

Shape make_circle3d(double R) {
  if (!(R > 0.0)) throw Error(ErrorKind::InvalidArgument, "circle radius must be positive");
  Shape s;
  Submanifold& M = s.manifold;
  M.name = "circle3d";
  M.ambient_dim = 3;
  M.codim = 2;
  M.tube_radius = R;
  M.constraint = [R](const Vec& x) {
    Vec F(2);
    F << x(0) * x(0) + x(1) * x(1) - R * R, x(2);
    return F;
  };
  M.constraint_jacobian = [](const Vec& x) {
    Mat J(2, 3);
    J << 2 * x(0), 2 * x(1), 0, 0, 0, 1;
    return J;
  };
  M.closed_form_projection = [R](const Vec& x) {
    const double s = std::hypot(x(0), x(1));
    Vec xi(3);
    xi << R * x(0) / s, R * x(1) / s, 0.0;
    return xi;
  };
  auto b = [R](int q, const Vec& xi, const Vec& omega) {
    Mat P = Mat::Zero(3, 3);
    const double u0 = xi(0) / R, u1 = xi(1) / R;
    P(0, 0) = 1 - u0 * u0;
    P(0, 1) = P(1, 0) = -u0 * u1;
    P(1, 1) = 1 - u1 * u1;
    return Mat(P * std::pow(-omega(0) / R, q));
  };
  M.analytic_b = b;
  M.log_density_gradient = [R](const Vec& xi, const Vec& omega, double rho, int i) {
    const double n1 = i < 2 ? xi(i) / R : 0.0;
    return n1 / (R + rho * omega(0));
  };
  M.log_density_gradient_coeffs = [R](const Vec& xi, const Vec& omega, int i, int top) {
    std::vector<double> c(top + 1);
    double t = i < 2 ? xi(i) / (R * R) : 0.0;
    for (int q = 0; q <= top; ++q, t *= -omega(0) / R) c[q] = t;
    return c;
  };
  M.surface_rule = [R](int level) { return circle_rule(R, level, 3); };
  M.default_sigma_level = 127;

  ShapeOracle& o = s.oracle;
  o.shape_id = "circle3d";
  o.projection = M.closed_form_projection;
  o.frame = [R](const Vec& xi) {
    Mat N = Mat::Zero(3, 2);
    N(0, 0) = xi(0) / R;
    N(1, 0) = xi(1) / R;
    N(2, 1) = 1.0;
    return N;
  };
  o.jacobian_pi = [R](const Vec& x) {
    const double s = std::hypot(x(0), x(1));
    const double u0 = x(0) / s, u1 = x(1) / s;
    Mat J = Mat::Zero(3, 3);
    J(0, 0) = (R / s) * (1 - u0 * u0);
    J(0, 1) = J(1, 0) = -(R / s) * u0 * u1;
    J(1, 1) = (R / s) * (1 - u1 * u1);
    return J;
  };
  o.b = b;
  o.table["length"] = 2.0 * kPi * R;
  return s;
}

double sphere_delta_derivative_oracle(int n, double r, int i, int k, int j) {
  if (i != k || j < 0 || j % 2 == 1) return 0.0;
  return std::pow(r, n - j - 2) * unit_sphere_area(n) * (1.0 / n - 1.0);
}

}  // namespace tubecalc
