#include "tubecalc/quadrature.hpp"

#include "tubecalc/parallel.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

namespace tubecalc {

namespace {

RadialRule compute_gauss_legendre(int p) {
  RadialRule r;
  r.nodes.resize(p);
  r.weights.resize(p);
  for (int k = 0; k < p; ++k) {
    double x = std::cos(std::numbers::pi * (k + 0.75) / (p + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int m = 2; m <= p; ++m) {
        const double p2 = ((2.0 * m - 1.0) * x * p1 - (m - 1.0) * p0) / m;
        p0 = p1;
        p1 = p2;
      }
      dp = p * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    r.nodes[p - 1 - k] = x;
    r.weights[p - 1 - k] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return r;
}

}  // namespace

RadialRule gauss_legendre(int p) {
  static std::mutex m;
  static std::map<int, RadialRule> cache;
  std::lock_guard<std::mutex> lock(m);
  auto it = cache.find(p);
  if (it == cache.end()) it = cache.emplace(p, compute_gauss_legendre(p)).first;
  return it->second;
}

RadialRule gauss_legendre(int p, double a, double b) {
  RadialRule r = gauss_legendre(p);
  const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
  for (int k = 0; k < p; ++k) {
    r.nodes[k] = mid + half * r.nodes[k];
    r.weights[k] *= half;
  }
  return r;
}

RadialRule graded_rule(int points_per_piece, double b, int pieces) {
  RadialRule out;
  double hi = b;
  for (int k = 0; k <= pieces; ++k) {
    const double lo = (k == pieces) ? 0.0 : 0.5 * hi;
    RadialRule piece = gauss_legendre(points_per_piece, lo, hi);
    out.nodes.insert(out.nodes.end(), piece.nodes.begin(), piece.nodes.end());
    out.weights.insert(out.weights.end(), piece.weights.begin(), piece.weights.end());
    hi = lo;
  }
  return out;
}

double unit_sphere_area(int k) {
  return 2.0 * std::pow(std::numbers::pi, 0.5 * k) / std::tgamma(0.5 * k);
}

QuadratureRule sigma_rule(const Submanifold& M, int level) {
  if (!M.surface_rule) throw Error(ErrorKind::ShapeUnsupported, "no surface rule for shape " + M.name);
  return M.surface_rule(level < 0 ? M.default_sigma_level : level);
}

QuadratureRule fiber_rule(int d, int level) {
  QuadratureRule q;
  if (d == 1) {
    Vec plus(1), minus(1);
    plus << 1.0;
    minus << -1.0;
    q.nodes = {plus, minus};
    q.weights = {1.0, 1.0};
    q.measure_total = 2.0;
  } else if (d == 2) {
    const int N = 8 * std::max(1, level);
    for (int k = 0; k < N; ++k) {
      const double t = 2.0 * std::numbers::pi * k / N;
      Vec w(2);
      w << std::cos(t), std::sin(t);
      q.nodes.push_back(w);
      q.weights.push_back(2.0 * std::numbers::pi / N);
    }
    q.measure_total = 2.0 * std::numbers::pi;
  } else if (d == 3) {
    const int p = 2 * std::max(1, level) + 1;
    const int N = 2 * p;
    RadialRule gl = gauss_legendre(p);
    for (int a = 0; a < p; ++a) {
      const double z = gl.nodes[a], s = std::sqrt(1.0 - z * z);
      for (int k = 0; k < N; ++k) {
        const double t = 2.0 * std::numbers::pi * k / N;
        Vec w(3);
        w << s * std::cos(t), s * std::sin(t), z;
        q.nodes.push_back(w);
        q.weights.push_back(gl.weights[a] * 2.0 * std::numbers::pi / N);
      }
    }
    q.measure_total = 4.0 * std::numbers::pi;
  } else {
    throw Error(ErrorKind::DimUnsupported, "fiber rules exist for d in {1, 2, 3}");
  }
  return q;
}

double fp_radial(double a, double eta) {
  if (std::abs(a + 1.0) < 1e-9) return std::log(eta);
  return std::pow(eta, a + 1.0) / (a + 1.0);
}

double integrate_tube_once(const Submanifold& M, const TubeIntegrand& f, double rho_a, double rho_b,
                           const QuadratureLevels& levels) {
  const QuadratureRule sig = sigma_rule(M, levels.sigma_level);
  const QuadratureRule fib = fiber_rule(M.codim, levels.fiber_level);
  const int d = M.codim;
  const RadialRule rad = rho_a == 0.0 ? graded_rule(std::max(8, levels.radial_points / 4), rho_b)
                                      : gauss_legendre(levels.radial_points, rho_a, rho_b);
  std::vector<double> per_node = parallel_map(sig.size(), [&](std::size_t s) {
    const Vec& xi = sig.nodes[s];
    const Mat N = frame(M, xi).normals;
    std::vector<double> acc;
    acc.reserve(fib.size() * rad.nodes.size());
    for (std::size_t w = 0; w < fib.size(); ++w) {
      for (std::size_t r = 0; r < rad.nodes.size(); ++r) {
        const double rho = rad.nodes[r];
        const TubePoint p = make_tube_point(N, xi, fib.nodes[w], rho);
        acc.push_back(fib.weights[w] * rad.weights[r] * std::pow(rho, d - 1) * f(p));
      }
    }
    return sig.weights[s] * pairwise_sum(acc);
  });
  return pairwise_sum(per_node);
}

TubeIntegral integrate_tube(const Submanifold& M, const TubeIntegrand& f, double rho_a, double rho_b,
                            const QuadratureLevels& levels) {
  auto doubled = [&](const QuadratureLevels& l) {
    QuadratureLevels o = l;
    o.sigma_level = 2 * (l.sigma_level < 0 ? M.default_sigma_level : l.sigma_level) + 1;
    o.fiber_level = 2 * l.fiber_level;
    o.radial_points = 2 * l.radial_points;
    return o;
  };
  auto close = [](double a, double b) { return std::abs(a - b) < 1e-8 * std::max(1.0, std::abs(b)); };
  QuadratureLevels l1 = doubled(levels);
  const double v0 = integrate_tube_once(M, f, rho_a, rho_b, levels);
  const double v1 = integrate_tube_once(M, f, rho_a, rho_b, l1);
  TubeIntegral out{v1, std::abs(v1 - v0), close(v0, v1)};
  if (out.converged) return out;
  const double v2 = integrate_tube_once(M, f, rho_a, rho_b, doubled(l1));
  out = {v2, std::abs(v2 - v1), close(v1, v2)};
  if (!out.converged) throw Error(ErrorKind::NotConverged, "tube integral failed the doubling gate");
  return out;
}

}  // namespace tubecalc
