#include "tubecalc/expansion.hpp"

#include "tubecalc/numdiff.hpp"
#include "tubecalc/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

namespace tubecalc {

namespace {

// Fit ladder: ρ_t = ρ_0 r^t with r = 2^{-1/2}; six guard powers beyond the
// requested top order and six more rows than unknowns.
// One-sided fits: Chebyshev radii on (0, ρ_0], rows weighted by ρ/ρ_0 since the
// evaluation noise of singular functions grows like 1/ρ.
constexpr int kFitPowers = 14;
constexpr int kMinGuardPowers = 4;
constexpr int kFitSamples = 40;
// Full-line fits for smooth fields.
constexpr int kLinePowers = 17;
constexpr int kLineSamples = 48;
constexpr double kMaxCondition = 1e12;

double fit_radius(const Submanifold& M, const ThickFunction& phi) {
  double limit = std::min(M.tube_radius, phi.support_radius());
  for (double b : phi.breakpoints()) limit = std::min(limit, b);
  return 0.75 * limit;
}

void enumerate_multi_indices(int d, int order, std::vector<int>& cur,
                             std::vector<std::vector<int>>& out) {
  if (static_cast<int>(cur.size()) == d - 1) {
    cur.push_back(order);
    out.push_back(cur);
    cur.pop_back();
    return;
  }
  for (int a = order; a >= 0; --a) {
    cur.push_back(a);
    enumerate_multi_indices(d, order - a, cur, out);
    cur.pop_back();
  }
}

double factorial(int k) {
  double f = 1.0;
  for (int t = 2; t <= k; ++t) f *= t;
  return f;
}

}  // namespace

std::vector<double> ThickFunction::coefficients(const Submanifold& M, const Vec& xi, const Vec& omega,
                                                int top) const {
  return fit_coefficients(M, xi, omega, top);
}

std::vector<double> ThickFunction::fit_coefficients(const Submanifold& M, const Vec& xi,
                                                    const Vec& omega, int top,
                                                    FitReport* report) const {
  const int m = leading_order();
  if (top < m) return {};
  if (top - m > 12) throw Error(ErrorKind::InvalidArgument, "fit supports at most 13 orders");
  const int K = std::max(kFitPowers, top - m + 1 + kMinGuardPowers);
  const int T = kFitSamples;
  const double rho0 = fit_radius(M, *this);
  const Mat N = frame(M, xi).normals;

  Eigen::MatrixXd A(T, K);
  Eigen::VectorXd y(T);
  for (int t = 0; t < T; ++t) {
    const double u = 0.5 * (1.0 - std::cos(std::numbers::pi * (t + 0.5) / T));
    const double rho = rho0 * u;
    y(t) = u * eval(M, make_tube_point(N, xi, omega, rho)) / std::pow(u, m);
    double up = u;
    for (int p = 0; p < K; ++p, up *= u) A(t, p) = up;
  }
  Eigen::VectorXd colscale = A.colwise().norm().transpose();
  for (int p = 0; p < K; ++p) A.col(p) /= colscale(p);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  const double cond = sv(0) / sv(sv.size() - 1);
  if (!(cond < kMaxCondition)) {
    throw Error(ErrorKind::IllConditioned, "expansion fit matrix is ill-conditioned");
  }
  Eigen::VectorXd x = svd.solve(y);
  if (report) {
    const double ymax = std::max(1e-300, y.cwiseAbs().maxCoeff());
    report->residual = std::sqrt((A * x - y).squaredNorm() / T) / ymax;
    report->condition = cond;
  }
  std::vector<double> a(top - m + 1);
  for (int j = m; j <= top; ++j) a[j - m] = x(j - m) / colscale(j - m) / std::pow(rho0, j);
  return a;
}

std::vector<double> line_taylor_fit(const Submanifold& M, const ScalarField& f, const Vec& xi,
                                    const Vec& omega, int top, double half_width) {
  const int K = std::max(kLinePowers, top + 1);
  const int T = kLineSamples;
  const Vec dir = frame(M, xi).normals * omega;
  Eigen::MatrixXd A(T, K);
  Eigen::VectorXd y(T);
  for (int t = 0; t < T; ++t) {
    const double u = -std::cos(std::numbers::pi * (t + 0.5) / T);
    y(t) = f(xi + half_width * u * dir);
    double up = 1.0;
    for (int p = 0; p < K; ++p, up *= u) A(t, p) = up;
  }
  const Eigen::VectorXd x = A.colPivHouseholderQr().solve(y);
  std::vector<double> a(top + 1);
  for (int j = 0; j <= top; ++j) a[j] = x(j) / std::pow(half_width, j);
  return a;
}

std::vector<std::vector<int>> multi_indices(int d, int order) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  enumerate_multi_indices(d, order, cur, out);
  return out;
}

ExpansionCoefficients extract_coeffs(const Submanifold& M, const ThickFunction& phi, const Vec& xi,
                                     const Vec& omega, int J, FitReport* report) {
  ExpansionCoefficients out;
  out.m = phi.leading_order();
  if (J - out.m > 12) throw Error(ErrorKind::InvalidArgument, "J - m must not exceed 12");
  out.values = phi.has_analytic_coeffs() ? phi.coefficients(M, xi, omega, J)
                                         : phi.fit_coefficients(M, xi, omega, J, report);
  if (static_cast<int>(out.values.size()) < J - out.m + 1) {
    throw Error(ErrorKind::ExpansionUnavailable, "expansion not available to the requested order");
  }
  out.J = J;
  return out;
}

std::vector<double> taylor_coeffs_smooth(const Submanifold& M, const ScalarField& phi, const Vec& xi,
                                         const Vec& omega, int J) {
  if (J > 3) throw Error(ErrorKind::OrderTooHigh, "numerical Taylor coefficients need J <= 3");
  const int d = M.codim;
  std::vector<double> a(J + 1, 0.0);
  for (int j = 0; j <= J; ++j) {
    for (const auto& alpha : multi_indices(d, j)) {
      double w = 1.0, fact = 1.0;
      for (int k = 0; k < d; ++k) {
        w *= std::pow(omega(k), alpha[k]);
        fact *= factorial(alpha[k]);
      }
      const double D = j == 0 ? phi(xi) : normal_derivative(M, phi, xi, alpha);
      a[j] += D * w / fact;
    }
  }
  return a;
}

ExpansionCoefficients expand_derivative(const Submanifold& M, const ThickFunction& phi, int i,
                                        const Vec& xi, const Vec& omega, int top) {
  const int n = M.ambient_dim;
  const int d = M.codim;
  const int m = phi.leading_order();
  ExpansionCoefficients out;
  out.m = m - 1;

  auto coeff_vec = [&](const Vec& x, const Vec& w) {
    std::vector<double> c = phi.coefficients(M, x, w, top + 1);
    return Eigen::VectorXd(Eigen::Map<Eigen::VectorXd>(c.data(), static_cast<Eigen::Index>(c.size())));
  };
  const Eigen::VectorXd a = coeff_vec(xi, omega);
  const int L = static_cast<int>(a.size());
  const int topA = m + L - 1;
  const int top_out = std::min({top, topA - 1, m + max_b_order(M)});
  out.J = top_out;
  if (top_out < out.m) return out;

  const Mat N = frame(M, xi).normals;
  const double th = N.row(i).dot(omega);
  const int needed = top_out - m + 1;  // orders m .. top_out need δ-derivatives
  auto trimmed = [&](const Vec& x, const Vec& w) {
    Eigen::VectorXd c = coeff_vec(x, w);
    Eigen::VectorXd r = Eigen::VectorXd::Zero(L);
    r.head(std::min<Eigen::Index>(L, c.size())) = c.head(std::min<Eigen::Index>(L, c.size()));
    return r;
  };
  const Eigen::MatrixXd Dxi = needed > 0 ? delta_gradient(M, trimmed, xi, omega) : Eigen::MatrixXd::Zero(L, n);

  // Fiber derivatives and the normal connection n_h·δn_k/δξ_l only matter for d >= 2.
  Eigen::MatrixXd Dom = Eigen::MatrixXd::Zero(L, d);
  std::vector<Eigen::VectorXd> rot(n, Eigen::VectorXd::Zero(d));  // rot[l](k) = Σ_h ω_h n_h·δn_k/δξ_l
  if (d >= 2) {
    Dom = omega_gradient(M, trimmed, xi, omega);
    const auto dN = frame_derivatives(M, xi);
    for (int l = 0; l < n; ++l) {
      Mat C = N.transpose() * dN[l];  // C(h, k) = n_h·δn_k/δξ_l
      rot[l] = Eigen::VectorXd(C.transpose() * omega);
    }
  }
  // Total tangential derivative of a_k along axis l, frame rotation included.
  auto tangential = [&](int k, int l) {
    const int r = k - m;
    return Dxi(r, l) + Dom.row(r).dot(rot[l]);
  };
  std::vector<Mat> b(std::max(0, top_out - m) + 1);
  for (int q = 1; q <= top_out - m; ++q) b[q] = b_matrix(M, q, xi, omega);

  out.values.assign(top_out - out.m + 1, 0.0);
  for (int j = out.m; j <= top_out; ++j) {
    double c = 0.0;
    if (j + 1 >= m && j + 1 <= topA) {
      const int r = j + 1 - m;
      c += (j + 1) * a(r) * th;
      for (int k = 0; k < d; ++k) c += Dom(r, k) * (N(i, k) - omega(k) * th);
    }
    if (j >= m) c += tangential(j, i);
    for (int k = m; k <= j - 1; ++k) {
      const Mat& B = b[j - k];
      for (int l = 0; l < n; ++l) c += B(l, i) * tangential(k, l);
    }
    out.values[j - out.m] = c;
  }
  return out;
}

double fd_derivative(const Submanifold& M, const ThickFunction& phi, const TubePoint& p, int i) {
  const double scale = std::max(1.0, p.x.norm());
  const double h = std::min(p.rho / 16.0, 1e-2 * scale);
  if (p.rho - 2.0 * h > phi.support_radius()) return 0.0;
  const Vec e = unit_vector(M.ambient_dim, i);
  return central_derivative<double>(
      [&](double t) { return phi.eval(M, locate(M, p.x + t * e)); }, 1, h, 4);
}

namespace {

// Log-log slope of |remainder| on a ladder, over points above the noise floor.
// Returns +inf when the remainder is at rounding level everywhere.
double remainder_slope(const std::vector<double>& rho, const std::vector<double>& rem,
                       const std::vector<double>& mag) {
  std::vector<double> lx, ly;
  for (std::size_t t = 0; t < rho.size(); ++t) {
    if (std::abs(rem[t]) > 1e-10 * std::max(1.0, mag[t])) {
      lx.push_back(std::log(rho[t]));
      ly.push_back(std::log(std::abs(rem[t])));
    }
  }
  if (lx.size() < 3) return std::numeric_limits<double>::infinity();
  double mx = 0, my = 0;
  for (std::size_t t = 0; t < lx.size(); ++t) mx += lx[t], my += ly[t];
  mx /= lx.size();
  my /= ly.size();
  double sxy = 0, sxx = 0;
  for (std::size_t t = 0; t < lx.size(); ++t) {
    sxy += (lx[t] - mx) * (ly[t] - my);
    sxx += (lx[t] - mx) * (lx[t] - mx);
  }
  return sxy / sxx;
}

}  // namespace

StrongExpansionReport validate_strong_expansion(const Submanifold& M, const FunctionPtr& phi,
                                                int samples, unsigned seed) {
  StrongExpansionReport rep;
  std::mt19937 rng(seed);
  std::normal_distribution<double> gauss;
  const QuadratureRule sig = sigma_rule(M, 4);
  std::uniform_int_distribution<std::size_t> pick(0, sig.size() - 1);
  std::uniform_int_distribution<int> axis(0, M.ambient_dim - 1);
  const int m = phi->leading_order();
  const int J = m + 2;
  double rho0 = std::min(M.tube_radius, phi->support_radius());
  for (double b : phi->breakpoints()) rho0 = std::min(rho0, b);
  rho0 *= 0.3;
  std::ostringstream detail;

  auto check = [&](auto&& value_at, const ExpansionCoefficients& c, int Jc, const char* what,
                   const Vec& xi, const Vec& w) {
    const Mat N = frame(M, xi).normals;
    std::vector<double> rho, rem, mag;
    for (int t = 0; t < 8; ++t) {
      const double r = rho0 * std::pow(0.5, t);
      const double v = value_at(make_tube_point(N, xi, w, r));
      double s = 0.0;
      for (int j = c.m; j <= Jc; ++j) s += c.at(j) * std::pow(r, j);
      rho.push_back(r);
      rem.push_back(v - s);
      mag.push_back(std::abs(v) + std::abs(s));
    }
    const double slope = remainder_slope(rho, rem, mag);
    rep.min_slope = std::min(rep.min_slope, slope - (Jc + 1));
    if (slope < Jc + 1 - 0.2) {
      rep.pass = false;
      detail << what << " slope " << slope << " < " << (Jc + 1) << "; ";
    }
  };

  for (int s = 0; s < samples; ++s) {
    const Vec xi = sig.nodes[pick(rng)];
    Vec w(M.codim);
    for (int k = 0; k < M.codim; ++k) w(k) = gauss(rng);
    w /= w.norm();
    ++rep.samples;
    ExpansionCoefficients c;
    try {
      c = extract_coeffs(M, *phi, xi, w, J);
    } catch (const Error& e) {
      rep.pass = false;
      detail << e.what() << "; ";
      continue;
    }
    check([&](const TubePoint& p) { return phi->eval(M, p); }, c, J, "function", xi, w);
    const int i = axis(rng);
    ExpansionCoefficients cd = expand_derivative(M, *phi, i, xi, w, J - 1);
    check([&](const TubePoint& p) { return fd_derivative(M, *phi, p, i); }, cd, cd.J, "derivative", xi,
          w);
  }
  rep.detail = detail.str();
  return rep;
}

}  // namespace tubecalc
