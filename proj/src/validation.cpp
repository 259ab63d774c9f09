#include "tubecalc/validation.hpp"

#include "tubecalc/distributions.hpp"
#include "tubecalc/parallel.hpp"
#include "tubecalc/shapes.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

namespace tubecalc {

namespace {

using Clock = std::chrono::steady_clock;

AngularFactor factor(const char* name) { return AngularFactor::parse(name); }

struct ShapeCase {
  Shape shape;
  std::string label;
  QuadratureLevels levels;
  FunctionPtr P, L, B, K, L0;  // catalog test functions used across criteria
};

ShapeCase sphere_case(double r, const SuiteOptions& o) {
  ShapeCase c{make_sphere(3, r), "sphere(n=3,r=" + std::to_string(static_cast<int>(r)) + ")", {}, {}, {}, {}, {}, {}};
  c.levels.sigma_level = o.level == SuiteLevel::Full ? 15 : 9;
  c.levels.radial_points = o.level == SuiteLevel::Full ? 48 : 32;
  if (o.fiber_level) c.levels.fiber_level = *o.fiber_level;
  c.P = make_smooth_poly({{1.0, {0, 0, 0}}, {1.0, {1, 0, 0}}, {0.5, {0, 1, 0}}, {0.3, {0, 0, 1}},
                          {0.4, {1, 1, 0}}, {0.2, {0, 0, 2}}},
                         0.8 * r);
  c.L = make_laurent(-1, {{1.0, factor("xi1")}, {0.5, factor("theta2")}, {0.25, factor("one")}}, 0.7 * r);
  c.B = make_bump(0.6 * r);
  c.K = make_normal_component(0, 0.75 * r);
  c.L0 = make_laurent(0, {{1.0, factor("one")}, {0.5, factor("theta1")}, {0.25, factor("xi2")}}, 0.7 * r);
  return c;
}

ShapeCase circle_case(const SuiteOptions& o) {
  ShapeCase c{make_circle3d(1.0), "circle3d(R=1)", {}, {}, {}, {}, {}, {}};
  c.levels.sigma_level = o.level == SuiteLevel::Full ? 15 : 11;
  c.levels.fiber_level = o.level == SuiteLevel::Full ? 3 : 2;
  c.levels.radial_points = o.level == SuiteLevel::Full ? 48 : 32;
  if (o.fiber_level) c.levels.fiber_level = *o.fiber_level;
  c.P = make_smooth_poly({{1.0, {0, 0, 0}}, {1.0, {1, 0, 0}}, {0.5, {0, 1, 0}}, {0.3, {0, 0, 1}},
                          {0.4, {1, 0, 1}}, {0.2, {0, 0, 2}}},
                         0.8);
  c.L = make_laurent(-1, {{1.0, factor("omega1")}, {0.5, factor("xi2")}, {0.25, factor("theta3")}}, 0.7);
  c.B = make_bump(0.6);
  c.K = make_laurent(0, {{1.0, factor("omega2")}, {0.5, factor("xi1")}}, 0.75);
  c.L0 = make_laurent(0, {{1.0, factor("one")}, {0.5, factor("theta1")}, {0.25, factor("xi2")}}, 0.7);
  return c;
}

PairOptions options(const ShapeCase& c, bool self_check) {
  PairOptions p;
  p.levels = c.levels;
  p.self_check = self_check;
  return p;
}

// Records a row against a mixed tolerance abs <= tol * max(1, |expected|) unless
// an absolute floor is requested.
struct Recorder {
  CriterionResult& res;
  void add(CheckRow row, double tol, bool relative_to_expected = true, double floor = 1.0) {
    const double scale = relative_to_expected ? std::max(floor, std::abs(row.expected)) : 1.0;
    row.abs_diff = std::abs(row.value - row.expected);
    row.tolerance = tol * scale;
    row.pass = std::isfinite(row.value) && row.abs_diff <= row.tolerance;
    res.worst = std::max(res.worst, row.abs_diff / scale);
    res.pass = res.pass && row.pass;
    res.rows.push_back(std::move(row));
  }
};

std::string fmt_id(const std::string& base, std::initializer_list<std::pair<const char*, double>> kv) {
  std::ostringstream os;
  os << base;
  for (const auto& [k, v] : kv) os << "." << k << v;
  return os.str();
}

// 1. Thick-delta derivative table on spheres.
void criterion1(const SuiteOptions& o, CriterionResult& res) {
  res.title = "sphere derivative table";
  res.reference = "<d_i delta^[j], phi_k> = delta_ik r^(n-j-2)|S^(n-1)|(1/n-1) for even j>=0, else 0";
  res.tolerance = 1e-4;
  Recorder rec{res};
  const bool full = o.level == SuiteLevel::Full;
  const std::vector<double> radii = full ? std::vector<double>{1.0, 2.0} : std::vector<double>{1.0};
  for (double r : radii) {
    ShapeCase c = sphere_case(r, o);
    const Submanifold& M = c.shape.manifold;
    const PairOptions po = options(c, false);
    for (int k = 0; k < 3; ++k) {
      const FunctionPtr phi = make_normal_component(k, 0.8 * r);
      for (int i = 0; i < 3; ++i) {
        if (!full && i != 0) continue;
        for (int j = -1; j <= 2; ++j) {
          const double oracle = sphere_delta_derivative_oracle(3, r, i, k, j);
          const DistPtr D = thick_delta({}, j);
          CheckRow row{"", c.label, "d" + std::to_string(i + 1) + "(delta[" + std::to_string(j) + "])",
                       phi->describe(), i + 1};
          row.expected = oracle;
          // Derivative-expansion route.
          row.check_id = fmt_id("C1", {{"r", r}, {"i", i + 1}, {"k", k + 1}, {"j", j}}) + ".expansion";
          row.value = pair(M, derivative(M, D, i), phi, po).value;
          if (oracle == 0.0) rec.add(row, 1e-8, false); else rec.add(row, 1e-4, true, 0.0);
          // Adjoint route with coefficients fitted to finite differences.
          row.check_id = fmt_id("C1", {{"r", r}, {"i", i + 1}, {"k", k + 1}, {"j", j}}) + ".adjoint";
          row.value = -pair(M, D, make_derivative(phi, i, CoefficientMode::SmoothAmbient), po).value;
          if (oracle == 0.0) rec.add(row, 1e-8, false); else rec.add(row, 1e-4, true, 0.0);
        }
      }
    }
  }
}

// 2. Mean-curvature identity.
void criterion2(const SuiteOptions& o, CriterionResult& res) {
  res.title = "mean-curvature identity";
  res.reference = "int_Sigma H dsigma = (1/(1-n)) <grad delta, n> = r^(n-2)|S^(n-1)|";
  res.tolerance = 1e-5;
  Recorder rec{res};
  for (double r : {1.0, 2.0}) {
    ShapeCase c = sphere_case(r, o);
    const Submanifold& M = c.shape.manifold;
    const double expected = std::pow(r, 1) * unit_sphere_area(3);
    const QuadratureRule sig = sigma_rule(M, c.levels.sigma_level);
    std::vector<double> h(sig.size());
    for (std::size_t k = 0; k < sig.size(); ++k)
      h[k] = sig.weights[k] * second_fundamental(M, sig.nodes[k]).mean_curvature;
    CheckRow row{fmt_id("C2", {{"r", r}}) + ".integral_H", c.label, "", "H", 0};
    row.value = pairwise_sum(h);
    row.expected = expected;
    rec.add(row, 1e-5, true, 0.0);

    double s = 0.0;
    for (int i = 0; i < 3; ++i) {
      s += pair(M, derivative(M, thick_delta({}, 0), i), make_normal_component(i, 0.8 * r),
                options(c, false)).value;
    }
    CheckRow row2{fmt_id("C2", {{"r", r}}) + ".divergence", c.label, "sum_i d_i(delta[0])",
                  "normal_component_i", 0};
    row2.value = s / (1.0 - 3.0);
    row2.expected = expected;
    rec.add(row2, 1e-5, true, 0.0);
  }
}

// 3. η-independence of finite-part pairings.
void criterion3(const SuiteOptions& o, CriterionResult& res) {
  res.title = "eta-independence of finite parts";
  res.reference = "pair(eta) = pair(eta/2) for Pf(rho^lambda)";
  res.tolerance = 1e-7;
  std::vector<ShapeCase> cases{sphere_case(1.0, o), circle_case(o)};
  const std::vector<double> lambdas = {0.5, -0.5, -1.5, -2.0, -3.0};
  for (auto& c : cases) {
    const Submanifold& M = c.shape.manifold;
    for (double lam : lambdas) {
      for (const FunctionPtr& phi : {c.P, c.L, c.B}) {
        const PairingResult pr = pair(M, pf_rho_lambda(lam), phi, options(c, true));
        CheckRow row{fmt_id("C3", {{"lambda", lam}}) + "." + c.shape.manifold.name + "." + phi->describe(),
                     c.label, "Pf(rho^" + std::to_string(lam) + ")", phi->describe(), 0};
        row.value = pr.value;
        row.eta = pr.eta_used;
        row.value_eta_half = pr.value_eta_half;
        row.expected = pr.value_eta_half;
        row.abs_diff = pr.abs_diff;
        row.tolerance = 1e-7 * (1.0 + std::abs(pr.value));
        row.pass = pr.abs_diff < row.tolerance;
        res.worst = std::max(res.worst, pr.abs_diff / (1.0 + std::abs(pr.value)));
        res.pass = res.pass && row.pass;
        res.rows.push_back(row);
      }
    }
  }
}

// 4. Convergent regime: finite part equals the plain tube integral.
void criterion4(const SuiteOptions& o, CriterionResult& res) {
  res.title = "convergent-regime equivalence";
  res.reference = "Re lambda > -d: Pf pairing = direct integral of rho^lambda phi";
  res.tolerance = 1e-8;
  Recorder rec{res};
  std::vector<ShapeCase> cases{sphere_case(1.0, o), circle_case(o)};
  for (auto& c : cases) {
    const Submanifold& M = c.shape.manifold;
    QuadratureLevels direct_levels = c.levels;
    direct_levels.radial_points = 32;  // graded rule: 8 points on each dyadic piece
    if (M.codim == 1) direct_levels.sigma_level = std::min(direct_levels.sigma_level, 11);
    for (double lam : {0.5, 0.0}) {
      for (const FunctionPtr& phi : {c.P, c.B, c.L0}) {
        CheckRow row{fmt_id("C4", {{"lambda", lam}}) + "." + M.name + "." + phi->describe(), c.label,
                     "Pf(rho^" + std::to_string(lam) + ")", phi->describe(), 0};
        const PairingResult pr = pair(M, pf_rho_lambda(lam), phi, options(c, false));
        row.value = pr.value;
        row.eta = pr.eta_used;
        // Graded rule up to the cutoff plateau, Gauss-Legendre across the cutoff ramp.
        const double s = phi->support_radius();
        const TubeIntegrand f = [&](const TubePoint& p) { return std::pow(p.rho, lam) * phi->eval(M, p); };
        const double direct = integrate_tube(M, f, 0.0, 0.5 * s, direct_levels).value +
                              integrate_tube(M, f, 0.5 * s, s, c.levels).value;
        row.expected = direct;
        rec.add(row, 1e-8);
      }
    }
  }
}

// 5. Residues of the analytic family λ ↦ Pf(ρ^λ).
void criterion5(const SuiteOptions& o, CriterionResult& res) {
  res.title = "residue formula";
  res.reference = "Res_{lambda=k} Pf(rho^lambda) = |S^(d-1)| delta^[-k-d]";
  res.tolerance = 1e-3;
  Recorder rec{res};
  std::vector<ShapeCase> cases{sphere_case(1.0, o), circle_case(o)};
  for (auto& c : cases) {
    const Submanifold& M = c.shape.manifold;
    const int d = M.codim;
    for (int t = 0; t <= 2; ++t) {
      const int k = -d - t;
      for (const FunctionPtr& phi : {c.P, c.L0}) {
        const ResidueResult rr = residue(M, k, phi, options(c, false));
        CheckRow row{fmt_id("C5", {{"k", k}}) + "." + M.name + "." + phi->describe(), c.label,
                     "Res Pf(rho^lambda) at " + std::to_string(k), phi->describe(), 0};
        row.value = rr.lambda_limit;
        row.expected = rr.value;
        rec.add(row, 1e-3, true, 1e-5);
      }
    }
  }
}

// 6. Adjoint identity across the distribution/test-function/axis grid.
void criterion6(const SuiteOptions& o, CriterionResult& res) {
  res.title = "adjoint identity";
  res.reference = "<derivative(T,i), phi> = -<T, d phi/dx_i>";
  res.tolerance = 1e-5;
  Recorder rec{res};
  const bool full = o.level == SuiteLevel::Full;
  std::vector<ShapeCase> cases{sphere_case(1.0, o), circle_case(o)};
  const std::vector<DistPtr> dists = {pf_rho_lambda(0.5), pf_rho_lambda(-1.5), pf_rho_lambda(0.0),
                                      thick_delta({}, -1), thick_delta({}, 0), thick_delta({}, 1)};
  for (auto& c : cases) {
    const Submanifold& M = c.shape.manifold;
    const PairOptions po = options(c, false);
    for (const DistPtr& T : dists) {
      for (int i = 0; i < 3; ++i) {
        const std::vector<FunctionPtr> fns =
            full ? std::vector<FunctionPtr>{c.P, c.L, c.K} : std::vector<FunctionPtr>{i == 0 ? c.P : c.L};
        for (const FunctionPtr& phi : fns) {
          CheckRow row{"C6." + M.name + "." + T->describe() + ".i" + std::to_string(i + 1) + "." +
                           phi->describe(),
                       c.label, T->describe(), phi->describe(), i + 1};
          row.value = pair(M, derivative(M, T, i), phi, po).value;
          // Independent numerical derivative of φ: full-line fit for fields smooth
          // across Σ, one-sided ray fit otherwise.
          const bool smooth = phi == c.P || (phi == c.K && M.codim == 1);
          const CoefficientMode mode = smooth ? CoefficientMode::SmoothAmbient : CoefficientMode::Fitted;
          row.expected = -pair(M, T, make_derivative(phi, i, mode), po).value;
          rec.add(row, 1e-5);
        }
      }
    }
  }
}

// 7. Closed-form derivative identities of Pf(ρ^λ) and Pf(ψ), as displayed.
void criterion7(const SuiteOptions& o, CriterionResult& res) {
  res.title = "Pf derivative identities (literal form)";
  res.reference = "d_i Pf(rho^l) = l theta_i Pf(rho^(l-1)) [+ |S| theta_i delta^[1-d-k]]; "
                  "d_i Pf(psi) = Pf(d_i psi) + |S| psi theta_i delta^[1-d]";
  res.tolerance = 1e-5;
  Recorder rec{res};
  std::vector<ShapeCase> cases{sphere_case(1.0, o), circle_case(o)};
  double worst_unexplained = 0.0;
  for (auto& c : cases) {
    const Submanifold& M = c.shape.manifold;
    const int d = M.codim;
    const double area = unit_sphere_area(d);
    const PairOptions po = options(c, false);
    for (int i = 0; i < 3; ++i) {
      const FunctionPtr phi = i == 1 ? c.L : c.P;
      const FunctionPtr dphi = make_derivative(phi, i);
      const FunctionPtr dlogJ = make_log_density_gradient(M, i);
      const AngularFactor th{AngularFactor::Kind::Theta, i};
      for (double lam : {0.5, -1.5, 0.0, -1.0}) {
        const DistPtr T = pf_rho_lambda(lam);
        const double lhs = -pair(M, T, dphi, po).value;
        double rhs = lam == 0.0 ? 0.0 : lam * pair(M, multiplied(make_theta(i), pf_rho_lambda(lam - 1)), phi, po).value;
        if (std::abs(lam - std::round(lam)) < 1e-9) {
          rhs += area * pair(M, thick_delta(th, 1 - d - static_cast<int>(std::round(lam))), phi, po).value;
        }
        CheckRow row{fmt_id("C7." + M.name, {{"lambda", lam}, {"i", i + 1}}), c.label,
                     "Pf(rho^" + std::to_string(lam) + ")", phi->describe(), i + 1};
        row.value = lhs;
        row.expected = rhs;
        rec.add(row, 1e-5);
        // The gap should be exactly the tube-density term of the product measure.
        const double density = pair(M, multiplied(dlogJ, T), phi, po).value;
        worst_unexplained = std::max(worst_unexplained, std::abs(lhs - rhs + density) / std::max(1.0, std::abs(rhs)));
      }
      for (int which = 0; which < 2; ++which) {
        const FunctionPtr psi = which == 0 ? make_constant(1.0) : make_coordinate(0);
        const double lhs = -pair(M, pf_psi(psi), dphi, po).value;
        const double rhs = pair(M, pf_psi(make_derivative(psi, i)), phi, po).value +
                           area * pair(M, multiplied(psi, thick_delta(th, 1 - d)), phi, po).value;
        CheckRow row{fmt_id("C7." + M.name + ".psi_" + psi->describe(), {{"i", i + 1}}), c.label,
                     "Pf(" + psi->describe() + ")", phi->describe(), i + 1};
        row.value = lhs;
        row.expected = rhs;
        rec.add(row, 1e-5);
        const double density = pair(M, pf_psi(make_product(psi, dlogJ)), phi, po).value;
        worst_unexplained = std::max(worst_unexplained, std::abs(lhs - rhs + density) / std::max(1.0, std::abs(rhs)));
      }
    }
  }
  std::ostringstream note;
  note << "gap minus tube-density term: " << worst_unexplained;
  res.note = note.str();
}

// 8. Kernel of the projection Π on circle3d.
void criterion8(const SuiteOptions& o, CriterionResult& res) {
  res.title = "kernel-of-projection criterion";
  res.reference = "<Pi(g delta^[j]), phi> = 0 for all phi iff fiber moments of order j vanish";
  res.tolerance = 1e-8;
  ShapeCase c = circle_case(o);
  const Submanifold& M = c.shape.manifold;
  const double s = 0.8;
  auto with_cutoff = [&M, s](std::function<double(const Vec&)> f) {
    return ScalarField([&M, s, f](const Vec& x) { return f(x) * cutoff((x - project(M, x)).norm(), s); });
  };
  const std::vector<std::pair<std::string, ScalarField>> fields = {
      {"(x1^2+x2^2)(1+x3)", with_cutoff([](const Vec& x) { return (x(0) * x(0) + x(1) * x(1)) * (1 + x(2)); })},
      {"exp(x1)(1+x3)^2", with_cutoff([](const Vec& x) { return std::exp(x(0)) * (1 + x(2)) * (1 + x(2)); })},
      {"1+x1+2x3+x1x3+x2^2x3",
       with_cutoff([](const Vec& x) { return 1 + x(0) + 2 * x(2) + x(0) * x(2) + x(1) * x(1) * x(2); })},
  };
  const PairOptions po = options(c, false);
  struct Case {
    const char* g;
    int j;
  };
  const Case grid[] = {{"omega1", 0}, {"omega1", 1}, {"omega1", 2},
                       {"omega1sq_minus_half", 0}, {"omega1sq_minus_half", 1}, {"omega1sq_minus_half", 2},
                       {"one", 0}};
  for (const Case& cs : grid) {
    const AngularFactor g = AngularFactor::parse(cs.g);
    const bool moment_free = max_fiber_moment(M, g, cs.j, c.levels) < 1e-12;
    double biggest = 0.0;
    for (const auto& [name, f] : fields) {
      const ProjectionResult pr = project_pair(M, thick_delta(g, cs.j), f, s, po);
      biggest = std::max(biggest, std::abs(pr.value));
      CheckRow row{"C8." + std::string(cs.g) + ".j" + std::to_string(cs.j) + "." + name, c.label,
                   std::string(cs.g) + "*delta[" + std::to_string(cs.j) + "]", name, 0};
      row.value = pr.value;
      row.expected = moment_free ? 0.0 : std::numeric_limits<double>::quiet_NaN();
      row.abs_diff = std::abs(pr.value - pr.multilayer);
      if (moment_free) {
        row.tolerance = 1e-8;
        row.pass = std::abs(pr.value) < 1e-8;
        res.worst = std::max(res.worst, std::abs(pr.value));
      } else if (std::string(cs.g) == "one") {
        row.tolerance = 1e-3;
        row.pass = std::abs(pr.value) > 1e-3;
      } else {
        row.tolerance = 1e-4;  // route agreement only; nonvanishing is checked below
        row.pass = row.abs_diff < 1e-4;
      }
      res.pass = res.pass && row.pass;
      res.rows.push_back(row);
    }
    if (!moment_free) {
      CheckRow row{"C8." + std::string(cs.g) + ".j" + std::to_string(cs.j) + ".nonzero", c.label,
                   std::string(cs.g) + "*delta[" + std::to_string(cs.j) + "]", "max over fields", 0};
      row.value = biggest;
      row.tolerance = 1e-3;
      row.pass = biggest > 1e-3;
      res.pass = res.pass && row.pass;
      res.rows.push_back(row);
    }
  }
}

// 9. Geometry kernel.
void criterion9(const SuiteOptions& o, CriterionResult& res) {
  res.title = "geometry kernel";
  res.reference = "projection, grad rho, Taylor-vs-fit coefficients, numerical b";
  res.tolerance = 1e-4;
  std::mt19937 rng(20240611);
  std::normal_distribution<double> gauss;
  std::uniform_real_distribution<double> unif(0.05, 0.9);
  const int samples = o.level == SuiteLevel::Full ? 100 : 20;
  std::vector<Shape> shapes{make_sphere(3, 1.0), make_sphere(3, 2.0), make_circle3d(1.0)};
  auto add = [&](const std::string& id, const std::string& shape, double worst, double tol) {
    CheckRow row{id, shape, "", "", 0};
    row.value = worst;
    row.expected = 0.0;
    row.abs_diff = worst;
    row.tolerance = tol;
    row.pass = worst < tol;
    res.worst = std::max(res.worst, worst / tol * res.tolerance);
    res.pass = res.pass && row.pass;
    res.rows.push_back(row);
  };
  for (const Shape& S : shapes) {
    const Submanifold& M = S.manifold;
    Submanifold generic = M;
    generic.closed_form_projection = nullptr;
    const std::string label = M.name + "(R=" + std::to_string(static_cast<int>(M.tube_radius)) + ")";
    auto random_point = [&](Vec& foot, Vec& w, double& rho) {
      if (M.codim == 1) {
        Vec g(3);
        for (int t = 0; t < 3; ++t) g(t) = gauss(rng);
        foot = M.tube_radius * g / g.norm();
      } else {
        const double t = 2 * std::numbers::pi * unif(rng);
        foot = Vec(3);
        foot << std::cos(t), std::sin(t), 0.0;
        foot *= M.tube_radius;
      }
      w = Vec(M.codim);
      for (int k = 0; k < M.codim; ++k) w(k) = gauss(rng);
      w /= w.norm();
      rho = unif(rng) * M.tube_radius;
    };
    double e_proj = 0, e_grad = 0, e_fd = 0, e_taylor = 0, e_b = 0;
    for (int s = 0; s < samples; ++s) {
      Vec foot, w;
      double rho;
      random_point(foot, w, rho);
      const Mat N = S.oracle.frame(foot);
      const Vec x = embed(N, foot, w, rho);
      e_proj = std::max(e_proj, (project(generic, x) - S.oracle.projection(x)).norm());
      const Vec g = grad_rho(M, x);
      e_grad = std::max(e_grad, (g - N * w).norm());
      Vec fd(3);
      for (int i = 0; i < 3; ++i) {
        const double h = 1e-5;
        const Vec e = unit_vector(3, i);
        fd(i) = ((x + h * e - project(generic, x + h * e)).norm() -
                 (x - h * e - project(generic, x - h * e)).norm()) / (2 * h);
      }
      e_fd = std::max(e_fd, (fd - g).norm());
    }
    add("C9." + M.name + ".projection_vs_closed_form." + label, label, e_proj, 1e-10);
    add("C9." + M.name + ".grad_rho_vs_theta." + label, label, e_grad, 1e-6);
    add("C9." + M.name + ".grad_rho_vs_fd." + label, label, e_fd, 1e-6);

    const ScalarField smooth = [](const Vec& x) { return std::exp(0.3 * x(0)) * (1 + x(1)) + x(2) * x(2); };
    const FunctionPtr field = make_smooth_field(smooth, 0.8 * M.tube_radius, "smooth");
    for (int s = 0; s < samples / 5; ++s) {
      Vec foot, w;
      double rho;
      random_point(foot, w, rho);
      const auto taylor = taylor_coeffs_smooth(M, smooth, foot, w, 3);
      const auto fit = field->fit_coefficients(M, foot, w, 3);
      for (int j = 0; j <= 3; ++j) e_taylor = std::max(e_taylor, std::abs(taylor[j] - fit[j]));
      if (M.name == "sphere") {
        for (int q = 1; q <= 2; ++q) {
          const Mat bn = b_matrix_numerical(M, q, foot, w);
          const Mat bc = S.oracle.b(q, foot, w);
          e_b = std::max(e_b, (bn - bc).cwiseAbs().maxCoeff() / bc.cwiseAbs().maxCoeff());
        }
      }
    }
    add("C9." + M.name + ".taylor_vs_fit." + label, label, e_taylor, 1e-5);
    if (M.name == "sphere") add("C9." + M.name + ".b_numerical_vs_closed_form." + label, label, e_b, 1e-4);
  }
}

}  // namespace

std::vector<CriterionResult> run_validation(const SuiteOptions& opts) {
  using Fn = void (*)(const SuiteOptions&, CriterionResult&);
  const Fn table[] = {criterion1, criterion2, criterion3, criterion4, criterion5,
                      criterion6, criterion7, criterion8, criterion9};
  std::vector<CriterionResult> out;
  for (int id = 1; id <= 9; ++id) {
    if (!opts.only.empty() && std::find(opts.only.begin(), opts.only.end(), id) == opts.only.end()) continue;
    CriterionResult r;
    r.id = id;
    const auto t0 = Clock::now();
    try {
      table[id - 1](opts, r);
    } catch (const std::exception& e) {
      r.pass = false;
      r.note = std::string("exception: ") + e.what();
    }
    r.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
    if (opts.on_result) opts.on_result(r);
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace tubecalc
