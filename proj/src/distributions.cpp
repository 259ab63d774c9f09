#include "tubecalc/distributions.hpp"

#include "tubecalc/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace tubecalc {

namespace {

bool is_integer(double x) { return std::abs(x - std::round(x)) < 1e-9; }

std::string number(double x) {
  std::ostringstream os;
  os << x;
  return os.str();
}

}  // namespace

std::string ThickDistribution::describe() const {
  struct V {
    std::string operator()(const PfRhoLambda& p) const { return "Pf(rho^" + number(p.lambda) + ")"; }
    std::string operator()(const PfPsi& p) const { return "Pf(" + p.psi->describe() + ")"; }
    std::string operator()(const ThickDelta& t) const {
      std::string s = t.g.describe() + "*delta[" + std::to_string(t.degree) + "]";
      for (int a : t.axes) s = "d" + std::to_string(a + 1) + "(" + s + ")";
      return s;
    }
    std::string operator()(const Multiplied& m) const {
      return m.psi->describe() + "*" + m.inner->describe();
    }
    std::string operator()(const LinearCombination& c) const {
      std::string s;
      for (std::size_t k = 0; k < c.terms.size(); ++k) {
        if (k) s += " + ";
        s += number(c.terms[k].first) + "*" + c.terms[k].second->describe();
      }
      return "[" + s + "]";
    }
  };
  return std::visit(V{}, node);
}

DistPtr pf_rho_lambda(double lambda) {
  const bool integer = is_integer(lambda);
  return std::make_shared<ThickDistribution>(
      PfRhoLambda{integer ? std::round(lambda) : lambda, integer});
}

DistPtr pf_psi(FunctionPtr psi) { return std::make_shared<ThickDistribution>(PfPsi{std::move(psi)}); }

DistPtr thick_delta(AngularFactor g, int degree) {
  return std::make_shared<ThickDistribution>(ThickDelta{g, degree, {}});
}

DistPtr multiplied(FunctionPtr psi, DistPtr inner) {
  return std::make_shared<ThickDistribution>(Multiplied{std::move(psi), std::move(inner)});
}

DistPtr combination(std::vector<std::pair<double, DistPtr>> terms) {
  LinearCombination flat;
  for (auto& [c, T] : terms) {
    if (c == 0.0) continue;
    if (const auto* lc = std::get_if<LinearCombination>(&T->node)) {
      for (const auto& [c2, T2] : lc->terms) flat.terms.emplace_back(c * c2, T2);
    } else {
      flat.terms.emplace_back(c, T);
    }
  }
  return std::make_shared<ThickDistribution>(std::move(flat));
}

namespace {

struct EtaPair {
  double at_eta = 0.0;
  double at_half = 0.0;
};

// ∫_a^b ρ^p f(ρ) dρ by Gauss–Legendre, pieces split at the breakpoints inside (a, b).
template <class F>
double radial_integral(double a, double b, const std::vector<double>& breaks, int points, F&& f) {
  if (!(b > a)) return 0.0;
  std::vector<double> cuts{a};
  for (double x : breaks)
    if (x > a * (1 + 1e-12) && x < b * (1 - 1e-12)) cuts.push_back(x);
  cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());
  double total = 0.0;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    const RadialRule r = gauss_legendre(points, cuts[k], cuts[k + 1]);
    std::vector<double> terms(r.nodes.size());
    for (std::size_t t = 0; t < r.nodes.size(); ++t) terms[t] = r.weights[t] * f(r.nodes[t]);
    total += pairwise_sum(terms);
  }
  return total;
}

// Finite-part pairing along one ray (ξ, ω) with split radius η:
//   ∫_η^s ρ^a φ + ∫_δ^η ρ^a (φ - S) + tail on [0, δ] + Σ_{j<=J*} c_j fp(a+j, η),
// where a = λ + d - 1 and S = Σ_{j<=J*} c_j ρ^j. Below δ the remainder is
// integrated term by term from the expansion, avoiding cancellation. δ = η/16 for
// analytic coefficients; fitted expansions carry fewer orders, so δ = η/64.
double ray_value(const Submanifold& M, const ThickFunction& phi, const Mat& N, const Vec& xi,
                 const Vec& omega, const std::vector<double>& c, int m, int Jstar, double a,
                 double eta, double s, int points, double delta_ratio) {
  const auto breaks = phi.breakpoints();
  auto S = [&](double rho) {
    double v = 0.0;
    for (int j = m; j <= Jstar; ++j) v += c[j - m] * std::pow(rho, j);
    return v;
  };
  auto f = [&](double rho) { return phi.eval(M, make_tube_point(N, xi, omega, rho)); };
  const double delta = eta * delta_ratio;
  double v = radial_integral(eta, s, breaks, points, [&](double r) { return std::pow(r, a) * f(r); });
  v += radial_integral(delta, eta, breaks, points,
                       [&](double r) { return std::pow(r, a) * (f(r) - S(r)); });
  for (int j = std::max(m, Jstar + 1); j < m + static_cast<int>(c.size()); ++j) {
    v += c[j - m] * std::pow(delta, a + j + 1) / (a + j + 1);
  }
  for (int j = m; j <= Jstar; ++j) v += c[j - m] * fp_radial(a + j, eta);
  return v;
}

EtaPair pair_pf(const Submanifold& M, const PfRhoLambda& P, const ThickFunction& phi,
                const PairOptions& opts, double eta) {
  const int d = M.codim;
  const double s = phi.support_radius();
  const int m = phi.leading_order();
  const int Jstar = P.integer ? static_cast<int>(-std::round(P.lambda)) - d
                              : static_cast<int>(std::floor(-P.lambda - d));
  const bool analytic = phi.has_analytic_coeffs();
  const int top = std::max(Jstar, m) + (analytic ? opts.extra_orders : std::min(opts.extra_orders, 3));
  const double ratio = analytic ? 1.0 / 16.0 : 1.0 / 64.0;
  const double a = P.lambda + d - 1;
  const QuadratureRule sig = sigma_rule(M, opts.levels.sigma_level);
  const QuadratureRule fib = fiber_rule(d, opts.levels.fiber_level);
  std::vector<EtaPair> per(sig.size());
  parallel_map(sig.size(), [&](std::size_t k) {
    const Vec& xi = sig.nodes[k];
    const Mat N = frame(M, xi).normals;
    std::vector<double> v1, v2;
    for (std::size_t w = 0; w < fib.size(); ++w) {
      const Vec& om = fib.nodes[w];
      const auto c = phi.coefficients(M, xi, om, top);
      if (Jstar >= m && static_cast<int>(c.size()) < Jstar - m + 1) {
        throw Error(ErrorKind::ExpansionUnavailable, "expansion too short for the finite-part split");
      }
      const int pts = opts.levels.radial_points;
      v1.push_back(fib.weights[w] * ray_value(M, phi, N, xi, om, c, m, Jstar, a, eta, s, pts, ratio));
      if (opts.self_check) {
        v2.push_back(fib.weights[w] * ray_value(M, phi, N, xi, om, c, m, Jstar, a, 0.5 * eta, s, pts, ratio));
      }
    }
    per[k].at_eta = sig.weights[k] * pairwise_sum(v1);
    per[k].at_half = opts.self_check ? sig.weights[k] * pairwise_sum(v2) : 0.0;
    return 0.0;
  });
  std::vector<double> a1(per.size()), a2(per.size());
  for (std::size_t k = 0; k < per.size(); ++k) a1[k] = per[k].at_eta, a2[k] = per[k].at_half;
  return {pairwise_sum(a1), pairwise_sum(a2)};
}

double pair_delta(const Submanifold& M, const ThickDelta& D, const FunctionPtr& phi,
                  const PairOptions& opts) {
  FunctionPtr f = phi;
  for (int ax : D.axes) f = make_derivative(f, ax);
  const int j = D.degree;
  const int m = f->leading_order();
  if (j < m) return 0.0;
  const int d = M.codim;
  const QuadratureRule sig = sigma_rule(M, opts.levels.sigma_level);
  const QuadratureRule fib = fiber_rule(d, opts.levels.fiber_level);
  const SurfaceFunction g = surface_function(M, D.g);
  std::vector<double> per = parallel_map(sig.size(), [&](std::size_t k) {
    const Vec& xi = sig.nodes[k];
    std::vector<double> v;
    for (std::size_t w = 0; w < fib.size(); ++w) {
      const auto c = f->coefficients(M, xi, fib.nodes[w], j);
      if (static_cast<int>(c.size()) < j - m + 1) {
        throw Error(ErrorKind::ExpansionUnavailable, "expansion too short for the thick delta degree");
      }
      v.push_back(fib.weights[w] * g(xi, fib.nodes[w]) * c[j - m]);
    }
    return sig.weights[k] * pairwise_sum(v);
  });
  const double sign = (D.axes.size() % 2) ? -1.0 : 1.0;
  return sign * pairwise_sum(per) / unit_sphere_area(d);
}

PairingResult pair_impl(const Submanifold& M, const DistPtr& T, const FunctionPtr& phi,
                        const PairOptions& opts) {
  PairingResult r;
  if (const auto* P = std::get_if<PfRhoLambda>(&T->node)) {
    const double s = phi->support_radius();
    if (!(s <= M.tube_radius)) {
      throw Error(ErrorKind::SupportExceedsTube, "test function support exceeds the tube radius");
    }
    const double eta = opts.eta.value_or(0.5 * s);
    const EtaPair v = pair_pf(M, *P, *phi, opts, eta);
    r.value = v.at_eta;
    r.has_eta = true;
    r.eta_used = eta;
    r.value_eta_half = opts.self_check ? v.at_half : v.at_eta;
  } else if (const auto* Q = std::get_if<PfPsi>(&T->node)) {
    return pair_impl(M, pf_rho_lambda(0.0), make_product(Q->psi, phi), opts);
  } else if (const auto* D = std::get_if<ThickDelta>(&T->node)) {
    if (!(phi->support_radius() <= M.tube_radius)) {
      throw Error(ErrorKind::SupportExceedsTube, "test function support exceeds the tube radius");
    }
    r.value = r.value_eta_half = pair_delta(M, *D, phi, opts);
  } else if (const auto* X = std::get_if<Multiplied>(&T->node)) {
    return pair_impl(M, X->inner, make_product(X->psi, phi), opts);
  } else if (const auto* C = std::get_if<LinearCombination>(&T->node)) {
    std::vector<double> v, h;
    for (const auto& [c, Tk] : C->terms) {
      const PairingResult rk = pair_impl(M, Tk, phi, opts);
      v.push_back(c * rk.value);
      h.push_back(c * rk.value_eta_half);
      if (rk.has_eta) {
        r.has_eta = true;
        r.eta_used = rk.eta_used;
      }
    }
    r.value = pairwise_sum(v);
    r.value_eta_half = pairwise_sum(h);
  }
  return r;
}

}  // namespace

PairingResult pair(const Submanifold& M, const DistPtr& T, const FunctionPtr& phi,
                   const PairOptions& opts) {
  PairingResult r = pair_impl(M, T, phi, opts);
  r.abs_diff = std::abs(r.value - r.value_eta_half);
  r.tolerance = 1e-7 * (1.0 + std::abs(r.value));
  r.eta_check_pass = !opts.self_check || !r.has_eta || r.abs_diff < r.tolerance;
  return r;
}

DistPtr derivative(const Submanifold& M, const DistPtr& T, int i) {
  const int d = M.codim;
  const double area = unit_sphere_area(d);
  const AngularFactor theta_i{AngularFactor::Kind::Theta, i};
  if (const auto* P = std::get_if<PfRhoLambda>(&T->node)) {
    std::vector<std::pair<double, DistPtr>> terms;
    if (P->lambda != 0.0) terms.emplace_back(P->lambda, multiplied(make_theta(i), pf_rho_lambda(P->lambda - 1)));
    if (P->integer) {
      const int k = static_cast<int>(std::round(P->lambda));
      terms.emplace_back(area, thick_delta(theta_i, 1 - d - k));
    }
    // Product-measure transpose: the tube volume density contributes -Pf(ρ^λ ∂_i log J).
    terms.emplace_back(-1.0, multiplied(make_log_density_gradient(M, i), T));
    return combination(std::move(terms));
  }
  if (const auto* Q = std::get_if<PfPsi>(&T->node)) {
    return combination({
        {1.0, pf_psi(make_derivative(Q->psi, i))},
        {area, multiplied(Q->psi, thick_delta(theta_i, 1 - d))},
        {-1.0, pf_psi(make_product(Q->psi, make_log_density_gradient(M, i)))},
    });
  }
  if (const auto* D = std::get_if<ThickDelta>(&T->node)) {
    ThickDelta next = *D;
    next.axes.push_back(i);
    return std::make_shared<ThickDistribution>(next);
  }
  if (const auto* X = std::get_if<Multiplied>(&T->node)) {
    return leibniz(M, X->psi, X->inner, i);
  }
  const auto& C = std::get<LinearCombination>(T->node);
  std::vector<std::pair<double, DistPtr>> terms;
  for (const auto& [c, Tk] : C.terms) terms.emplace_back(c, derivative(M, Tk, i));
  return combination(std::move(terms));
}

DistPtr leibniz(const Submanifold& M, const FunctionPtr& psi, const DistPtr& T, int i) {
  return combination({{1.0, multiplied(make_derivative(psi, i), T)},
                      {1.0, multiplied(psi, derivative(M, T, i))}});
}

ResidueResult residue(const Submanifold& M, int k, const FunctionPtr& phi, const PairOptions& opts) {
  ResidueResult r;
  const int d = M.codim;
  r.value = unit_sphere_area(d) * pair(M, thick_delta({}, -k - d), phi, opts).value;
  PairOptions o = opts;
  o.self_check = false;
  auto f = [&](double lam) { return (lam - k) * pair(M, pf_rho_lambda(lam), phi, o).value; };
  auto sym = [&](double h) { return 0.5 * (f(k + h) + f(k - h)); };
  const double h = 1e-3;
  r.lambda_limit = (4.0 * sym(0.5 * h) - sym(h)) / 3.0;
  return r;
}

double max_fiber_moment(const Submanifold& M, const AngularFactor& g, int j,
                        const QuadratureLevels& levels) {
  if (j < 0) return 0.0;
  const QuadratureRule sig = sigma_rule(M, levels.sigma_level);
  const QuadratureRule fib = fiber_rule(M.codim, levels.fiber_level);
  const SurfaceFunction gf = surface_function(M, g);
  double worst = 0.0;
  for (const auto& xi : sig.nodes) {
    for (const auto& alpha : multi_indices(M.codim, j)) {
      std::vector<double> v;
      for (std::size_t w = 0; w < fib.size(); ++w) {
        double mono = 1.0;
        for (int k = 0; k < M.codim; ++k) mono *= std::pow(fib.nodes[w](k), alpha[k]);
        v.push_back(fib.weights[w] * gf(xi, fib.nodes[w]) * mono);
      }
      worst = std::max(worst, std::abs(pairwise_sum(v)));
    }
  }
  return worst;
}

namespace {

// ⟨Π(g δ^{[j]}), φ⟩ through the multilayer form
//   (1/|S|) Σ_{|α|=j} (1/α!) ∫_Σ h_α D_n^α φ dσ,  h_α(ξ) = ⟨g(ξ,·), ω^α⟩.
double multilayer(const Submanifold& M, const ThickDelta& D, const ScalarField& phi,
                  const PairOptions& opts) {
  const int j = D.degree;
  if (j < 0) return 0.0;
  const int d = M.codim;
  const QuadratureRule sig = sigma_rule(M, opts.levels.sigma_level);
  const QuadratureRule fib = fiber_rule(d, opts.levels.fiber_level);
  const SurfaceFunction g = surface_function(M, D.g);
  const auto alphas = multi_indices(d, j);
  std::vector<double> per = parallel_map(sig.size(), [&](std::size_t k) {
    const Vec& xi = sig.nodes[k];
    double acc = 0.0;
    for (const auto& alpha : alphas) {
      std::vector<double> v;
      double fact = 1.0;
      for (int t = 0; t < d; ++t)
        for (int u = 2; u <= alpha[t]; ++u) fact *= u;
      for (std::size_t w = 0; w < fib.size(); ++w) {
        double mono = 1.0;
        for (int t = 0; t < d; ++t) mono *= std::pow(fib.nodes[w](t), alpha[t]);
        v.push_back(fib.weights[w] * g(xi, fib.nodes[w]) * mono);
      }
      const double h = pairwise_sum(v);
      if (h == 0.0) continue;
      const double Dn = j == 0 ? phi(xi) : normal_derivative(M, phi, xi, alpha);
      acc += h * Dn / fact;
    }
    return sig.weights[k] * acc;
  });
  return pairwise_sum(per) / unit_sphere_area(d);
}

}  // namespace

ProjectionResult project_pair(const Submanifold& M, const DistPtr& T, const ScalarField& phi,
                              double support, const PairOptions& opts) {
  ProjectionResult r;
  PairOptions o = opts;
  o.self_check = false;
  r.value = pair(M, T, make_smooth_field(phi, support, "smooth_field"), o).value;
  r.multilayer = r.value;
  const auto* D = std::get_if<ThickDelta>(&T->node);
  if (D && D->axes.empty()) {
    r.multilayer_applicable = true;
    r.multilayer = multilayer(M, *D, phi, o);
    if (!(std::abs(r.value - r.multilayer) < 1e-4)) {
      throw Error(ErrorKind::NotConverged, "projection routes disagree");
    }
  }
  return r;
}

}  // namespace tubecalc
