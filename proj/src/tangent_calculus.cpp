#include "tubecalc/tangent_calculus.hpp"

#include "tubecalc/numdiff.hpp"

#include <cmath>

namespace tubecalc {

namespace {

// First-order steps are larger than the textbook 1e-5: with two Richardson
// levels the truncation error is O(h^4), and rounding stays near 1e-13.
constexpr double kDeltaStep = 1e-3;
constexpr int kDeltaLevels = 2;

double step_scale(const Vec& xi) { return std::max(1.0, xi.norm()); }

Vec normalized(const Vec& w) { return w / w.norm(); }

}  // namespace

double delta_derivative(const Submanifold& M, const SurfaceFunction& f, const Vec& xi, int i,
                        const Vec& omega) {
  const Vec e = unit_vector(M.ambient_dim, i);
  const double h = kDeltaStep * step_scale(xi);
  return central_derivative<double>(
      [&](double t) { return f(project(M, xi + t * e), omega); }, 1, h, kDeltaLevels);
}

Eigen::MatrixXd delta_gradient(const Submanifold& M, const SurfaceVectorFunction& f, const Vec& xi,
                               const Vec& omega) {
  const int n = M.ambient_dim;
  const double h = kDeltaStep * step_scale(xi);
  Eigen::MatrixXd out;
  for (int l = 0; l < n; ++l) {
    const Vec e = unit_vector(n, l);
    Eigen::VectorXd col = central_derivative<Eigen::VectorXd>(
        [&](double t) { return f(project(M, xi + t * e), omega); }, 1, h, kDeltaLevels);
    if (l == 0) out.resize(col.size(), n);
    out.col(l) = col;
  }
  return out;
}

double delta_derivative_omega(const Submanifold& M, const SurfaceFunction& a, const Vec& xi,
                              const Vec& omega, int k) {
  const Vec e = unit_vector(M.codim, k);
  return central_derivative<double>(
      [&](double t) { return a(xi, normalized(omega + t * e)); }, 1, kDeltaStep, kDeltaLevels);
}

Eigen::MatrixXd omega_gradient(const Submanifold& M, const SurfaceVectorFunction& a, const Vec& xi,
                               const Vec& omega) {
  const int d = M.codim;
  Eigen::MatrixXd out;
  for (int k = 0; k < d; ++k) {
    const Vec e = unit_vector(d, k);
    Eigen::VectorXd col;
    if (d == 1) {
      // S^0 is discrete: the degree-0 extension is locally constant.
      col = Eigen::VectorXd::Zero(a(xi, omega).size());
    } else {
      col = central_derivative<Eigen::VectorXd>(
          [&](double t) { return a(xi, normalized(omega + t * e)); }, 1, kDeltaStep, kDeltaLevels);
    }
    if (k == 0) out.resize(col.size(), d);
    out.col(k) = col;
  }
  return out;
}

double normal_derivative(const Submanifold& M, const ScalarField& phi, const Vec& xi,
                         const std::vector<int>& alpha) {
  const int d = M.codim;
  if (static_cast<int>(alpha.size()) != d) {
    throw Error(ErrorKind::InvalidArgument, "multi-index length must equal the codimension");
  }
  int order = 0;
  for (int a : alpha) order += a;
  if (order > 3) throw Error(ErrorKind::OrderTooHigh, "normal derivatives are limited to order 3");
  const Mat N = frame(M, xi).normals;
  const double scale = step_scale(xi);
  // Per-order steps: higher orders need larger steps against rounding.
  const double steps[4] = {0.0, 1e-3, 4e-3, 1e-2};

  std::function<double(int, const Vec&)> rec = [&](int slot, const Vec& y) -> double {
    if (slot == d) return phi(xi + N * y);
    if (alpha[slot] == 0) return rec(slot + 1, y);
    const Vec e = unit_vector(d, slot);
    return central_derivative<double>([&](double t) { return rec(slot + 1, Vec(y + t * e)); },
                                      alpha[slot], steps[alpha[slot]] * scale, 2);
  };
  return rec(0, Vec::Zero(d));
}

Mat jacobian_pi(const Submanifold& M, const Vec& x) {
  const int n = M.ambient_dim;
  const double h = 1e-3 * step_scale(x);
  Mat J(n, n);
  for (int i = 0; i < n; ++i) {
    const Vec e = unit_vector(n, i);
    Vec col = central_derivative<Vec>([&](double t) { return project(M, x + t * e); }, 1, h, 3);
    J.col(i) = col;
  }
  return J;
}

int max_b_order(const Submanifold& M) { return M.analytic_b ? 64 : 2; }

Mat b_matrix_numerical(const Submanifold& M, int q, const Vec& xi, const Vec& omega) {
  if (q < 1) throw Error(ErrorKind::InvalidArgument, "b coefficients start at q = 1");
  if (q > 2) throw Error(ErrorKind::OrderTooHigh, "numerical b coefficients are limited to q <= 2");
  const Mat N = frame(M, xi).normals;
  const Vec v = N * omega;
  // Σ_{|α|=q} ω^α/α! D_n^α equals the q-th Taylor coefficient along the ray ξ + t v.
  const double h = 2e-2 * step_scale(xi);
  Mat D = central_derivative<Mat>([&](double t) { return jacobian_pi(M, xi + t * v); }, q, h, 2);
  return q == 1 ? D : Mat(D / 2.0);
}

Mat b_matrix(const Submanifold& M, int q, const Vec& xi, const Vec& omega) {
  if (M.analytic_b) return M.analytic_b(q, xi, omega);
  return b_matrix_numerical(M, q, xi, omega);
}

double b_coeff(const Submanifold& M, int l, int i, int q, const Vec& xi, const Vec& omega) {
  return b_matrix(M, q, xi, omega)(l, i);
}

double theta(const Submanifold& M, const Vec& xi, const Vec& omega, int i) {
  const Mat N = frame(M, xi).normals;
  return N.row(i).dot(omega);
}

std::vector<Mat> frame_derivatives(const Submanifold& M, const Vec& xi) {
  const int n = M.ambient_dim;
  const double h = kDeltaStep * step_scale(xi);
  std::vector<Mat> out;
  out.reserve(n);
  for (int l = 0; l < n; ++l) {
    const Vec e = unit_vector(n, l);
    out.push_back(central_derivative<Mat>(
        [&](double t) { return frame(M, project(M, xi + t * e)).normals; }, 1, h, kDeltaLevels));
  }
  return out;
}

SecondFundamentalData second_fundamental(const Submanifold& M, const Vec& xi) {
  if (M.codim != 1) throw Error(ErrorKind::CodimUnsupported, "second fundamental form needs d = 1");
  const int n = M.ambient_dim;
  const auto dN = frame_derivatives(M, xi);
  SecondFundamentalData s;
  s.base_point = xi;
  s.mu = Mat(n, n);
  for (int i = 0; i < n; ++i) s.mu.row(i) = dN[i].col(0).transpose();
  s.mean_curvature = s.mu.trace() / (n - 1);
  return s;
}

}  // namespace tubecalc
