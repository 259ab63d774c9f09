#include "tubecalc/geometry.hpp"

#include "tubecalc/numdiff.hpp"

#include <cmath>

namespace tubecalc {

const char* to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::RankDeficient: return "RankDeficient";
    case ErrorKind::OnManifold: return "OnManifold";
    case ErrorKind::OrderTooHigh: return "OrderTooHigh";
    case ErrorKind::CodimUnsupported: return "CodimUnsupported";
    case ErrorKind::IllConditioned: return "IllConditioned";
    case ErrorKind::ShapeUnsupported: return "ShapeUnsupported";
    case ErrorKind::DimUnsupported: return "DimUnsupported";
    case ErrorKind::NotConverged: return "NotConverged";
    case ErrorKind::ExpansionUnavailable: return "ExpansionUnavailable";
    case ErrorKind::SupportExceedsTube: return "SupportExceedsTube";
    case ErrorKind::SchemaError: return "SchemaError";
    case ErrorKind::IoError: return "IoError";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

Mat constraint_jacobian(const Submanifold& M, const Vec& x) {
  if (M.constraint_jacobian) return M.constraint_jacobian(x);
  const int n = M.ambient_dim;
  Mat J(M.codim, n);
  const double h = 1e-4 * std::max(1.0, x.norm());
  for (int i = 0; i < n; ++i) {
    Vec e = unit_vector(n, i);
    Vec col = central_derivative<Vec>([&](double t) { return Vec(M.constraint(x + t * e)); }, 1, h, 3);
    J.col(i) = col;
  }
  return J;
}

namespace {

constexpr double kResidualTol = 1e-12;
constexpr double kStepTol = 1e-12;
constexpr int kMaxIter = 50;

// Tangential part of x - ξ, the first-order optimality residual.
double tangential_residual(const Mat& J, const Vec& v) {
  Mat JJt = J * J.transpose();
  Vec mu = JJt.ldlt().solve(J * v);
  return (v - J.transpose() * mu).norm();
}

}  // namespace

Vec project(const Submanifold& M, const Vec& x) {
  const int n = M.ambient_dim;
  const int d = M.codim;
  const double scale = std::max(1.0, x.norm());

  Vec xi = M.closed_form_projection ? M.closed_form_projection(x) : x;
  if (M.closed_form_projection) {
    // Accept the closed form when it already satisfies the optimality system.
    Vec F = M.constraint(xi);
    if (F.norm() < kResidualTol * scale * scale) {
      Mat J = constraint_jacobian(M, xi);
      if (tangential_residual(J, x - xi) < 1e-12 * scale) return xi;
    }
  }

  // Newton on the Lagrange system  ξ - x + J^T μ = 0,  F(ξ) = 0.
  Eigen::VectorXd mu;
  {
    Mat J = constraint_jacobian(M, xi);
    Mat JJt = J * J.transpose();
    mu = Eigen::VectorXd(JJt.ldlt().solve(J * (x - xi)));
  }
  for (int it = 0; it < kMaxIter; ++it) {
    Vec F = M.constraint(xi);
    Mat J = constraint_jacobian(M, xi);
    Eigen::JacobiSVD<Mat> svd(J);
    const auto& sv = svd.singularValues();
    if (sv(d - 1) < 1e-12 * std::max(1.0, sv(0))) {
      throw Error(ErrorKind::RankDeficient, "constraint Jacobian loses rank during projection");
    }
    Eigen::MatrixXd K = Eigen::MatrixXd::Zero(n + d, n + d);
    Eigen::MatrixXd H = Eigen::MatrixXd::Identity(n, n);
    const double hh = 1e-5 * scale;
    for (int i = 0; i < n; ++i) {
      Vec e = unit_vector(n, i);
      Mat dJ = (constraint_jacobian(M, xi + hh * e) - constraint_jacobian(M, xi - hh * e)) / (2 * hh);
      for (int k = 0; k < d; ++k) H.col(i) += mu(k) * Eigen::VectorXd(dJ.row(k).transpose());
    }
    K.topLeftCorner(n, n) = H;
    K.topRightCorner(n, d) = J.transpose();
    K.bottomLeftCorner(d, n) = J;
    Eigen::VectorXd G(n + d);
    G.head(n) = Eigen::VectorXd(xi - x + J.transpose() * Vec(mu));
    G.tail(d) = Eigen::VectorXd(F);
    Eigen::VectorXd step = K.partialPivLu().solve(-G);
    xi += Vec(step.head(n));
    mu += step.tail(d);
    if (!xi.allFinite()) break;
    if (step.head(n).norm() < kStepTol * scale &&
        M.constraint(xi).norm() < kResidualTol * scale * scale) {
      return xi;
    }
  }
  // Accept a final iterate that meets the optimality tolerances even when the
  // last step stalled at rounding level.
  if (xi.allFinite() && M.constraint(xi).norm() < kResidualTol * scale * scale &&
      tangential_residual(constraint_jacobian(M, xi), x - xi) < 1e-10 * scale) {
    return xi;
  }
  throw Error(ErrorKind::NoConvergence, "projection did not converge within 50 iterations");
}

NormalFrame frame(const Submanifold& M, const Vec& xi) {
  const int d = M.codim;
  Mat J = constraint_jacobian(M, xi);
  NormalFrame fr;
  fr.base_point = xi;
  fr.normals = Mat::Zero(M.ambient_dim, d);
  for (int k = 0; k < d; ++k) {
    Vec v = J.row(k).transpose();
    const double scale = v.norm();
    for (int j = 0; j < k; ++j) v -= v.dot(fr.normals.col(j)) * fr.normals.col(j);
    const double len = v.norm();
    if (!(len > 1e-12 * std::max(1.0, scale))) {
      throw Error(ErrorKind::RankDeficient, "constraint rows are dependent at the base point");
    }
    fr.normals.col(k) = v / len;
  }
  return fr;
}

TubePoint make_tube_point(const Mat& normals, const Vec& foot, const Vec& omega, double rho) {
  TubePoint p;
  p.foot = foot;
  p.omega = omega;
  p.rho = rho;
  p.normals = normals;
  p.x = embed(normals, foot, omega, rho);
  return p;
}

TubePoint locate(const Submanifold& M, const Vec& x) {
  TubePoint p;
  p.x = x;
  p.foot = project(M, x);
  Vec v = x - p.foot;
  p.rho = v.norm();
  if (p.rho < 1e-13) throw Error(ErrorKind::OnManifold, "point lies on the submanifold");
  p.normals = frame(M, p.foot).normals;
  p.omega = p.normals.transpose() * v / p.rho;
  p.omega /= p.omega.norm();
  return p;
}

TubularCoordinates tube_coords(const Submanifold& M, const Vec& x) {
  TubePoint p = locate(M, x);
  return {p.foot, p.omega, p.rho};
}

Vec embed(const Mat& normals, const Vec& foot, const Vec& omega, double rho) {
  return foot + rho * (normals * omega);
}

Vec embed(const Submanifold& M, const TubularCoordinates& c) {
  return embed(frame(M, c.foot).normals, c.foot, c.fiber_dir, c.dist);
}

Vec grad_rho(const Submanifold& M, const Vec& x) {
  TubePoint p = locate(M, x);
  return p.normals * p.omega;
}

Mat tangent_basis(const Mat& normals) {
  const int n = static_cast<int>(normals.rows());
  const int d = static_cast<int>(normals.cols());
  Mat P = Mat::Identity(n, n) - normals * normals.transpose();
  Eigen::SelfAdjointEigenSolver<Mat> es(P);
  // Eigenvalues ascend: the last n-d eigenvectors span the tangent space.
  return es.eigenvectors().rightCols(n - d);
}

}  // namespace tubecalc
