#include "tubecalc/catalog.hpp"

#include "tubecalc/numdiff.hpp"

#include <cmath>
#include <sstream>

namespace tubecalc {

double cutoff(double rho, double s) {
  if (rho <= 0.5 * s) return 1.0;
  if (rho >= s) return 0.0;
  const double t = (rho - 0.5 * s) / (0.5 * s);
  auto f = [](double u) { return u > 0.0 ? std::exp(-1.0 / u) : 0.0; };
  return f(1.0 - t) / (f(1.0 - t) + f(t));
}

double AngularFactor::eval(const Vec& xi, const Vec& omega, const Mat& normals) const {
  switch (kind) {
    case Kind::One: return 1.0;
    case Kind::Omega: return omega(index);
    case Kind::Theta: return normals.row(index).dot(omega);
    case Kind::Xi: return xi(index);
    case Kind::Normal: return normals(index, 0);
    case Kind::Omega1SqMinusHalf: return omega(0) * omega(0) - 0.5;
  }
  return 0.0;
}

std::string AngularFactor::describe() const {
  const std::string k = std::to_string(index + 1);
  switch (kind) {
    case Kind::One: return "one";
    case Kind::Omega: return "omega" + k;
    case Kind::Theta: return "theta" + k;
    case Kind::Xi: return "xi" + k;
    case Kind::Normal: return "normal" + k;
    case Kind::Omega1SqMinusHalf: return "omega1sq_minus_half";
  }
  return "?";
}

AngularFactor AngularFactor::parse(const std::string& name) {
  AngularFactor g;
  if (name == "one") return g;
  if (name == "omega1sq_minus_half") {
    g.kind = Kind::Omega1SqMinusHalf;
    return g;
  }
  const std::pair<const char*, Kind> prefixes[] = {
      {"omega", Kind::Omega}, {"theta", Kind::Theta}, {"xi", Kind::Xi}, {"normal", Kind::Normal}};
  for (const auto& [p, kind] : prefixes) {
    const std::string pre(p);
    if (name.size() > pre.size() && name.compare(0, pre.size(), pre) == 0) {
      const std::string digits = name.substr(pre.size());
      if (digits.find_first_not_of("0123456789") != std::string::npos) break;
      g.kind = kind;
      g.index = std::stoi(digits) - 1;
      if (g.index < 0) break;
      return g;
    }
  }
  throw Error(ErrorKind::SchemaError, "unknown angular factor '" + name + "'");
}

namespace {

bool needs_frame(const AngularFactor& g) {
  return g.kind == AngularFactor::Kind::Theta || g.kind == AngularFactor::Kind::Normal;
}

void check_index(const Submanifold& M, const AngularFactor& g) {
  const int limit = g.kind == AngularFactor::Kind::Omega ? M.codim : M.ambient_dim;
  if (g.index >= limit) throw Error(ErrorKind::InvalidArgument, g.describe() + " out of range for shape");
}

}  // namespace

SurfaceFunction surface_function(const Submanifold& M, const AngularFactor& g) {
  check_index(M, g);
  if (!needs_frame(g)) {
    static const Mat kNoFrame;
    return [g](const Vec& xi, const Vec& omega) { return g.eval(xi, omega, kNoFrame); };
  }
  return [g, &M](const Vec& xi, const Vec& omega) { return g.eval(xi, omega, frame(M, xi).normals); };
}

namespace {

// χ_s(ρ) Σ_t c_t g_t ρ^{m+t}; without support it is a plain finite series.
class Laurent : public ThickFunction {
 public:
  Laurent(int m, std::vector<LaurentTerm> terms, double support, std::string name)
      : m_(m), terms_(std::move(terms)), support_(support), name_(std::move(name)) {
    for (const auto& t : terms_) frame_needed_ = frame_needed_ || needs_frame(t.factor);
  }
  int leading_order() const override { return m_; }
  double support_radius() const override { return support_; }
  std::vector<double> breakpoints() const override {
    if (std::isinf(support_)) return {};
    return {0.5 * support_};
  }
  bool has_analytic_coeffs() const override { return true; }

  double eval(const Submanifold&, const TubePoint& p) const override {
    const double chi = std::isinf(support_) ? 1.0 : cutoff(p.rho, support_);
    if (chi == 0.0) return 0.0;
    double s = 0.0, rp = std::pow(p.rho, m_);
    for (const auto& t : terms_) {
      s += t.c * t.factor.eval(p.foot, p.omega, p.normals) * rp;
      rp *= p.rho;
    }
    return chi * s;
  }

  std::vector<double> coefficients(const Submanifold& M, const Vec& xi, const Vec& omega,
                                   int top) const override {
    std::vector<double> a(std::max(0, top - m_ + 1), 0.0);
    const Mat N = frame_needed_ ? frame(M, xi).normals : Mat();
    for (std::size_t t = 0; t < terms_.size() && static_cast<int>(t) < static_cast<int>(a.size()); ++t) {
      a[t] = terms_[t].c * terms_[t].factor.eval(xi, omega, N);
    }
    return a;
  }

  std::string describe() const override { return name_; }

 private:
  int m_;
  std::vector<LaurentTerm> terms_;
  double support_;
  std::string name_;
  bool frame_needed_ = false;
};

std::vector<double> poly_mul(const std::vector<double>& a, const std::vector<double>& b, int top) {
  std::vector<double> c(std::min<std::size_t>(top + 1, a.size() + b.size() - 1), 0.0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size() && i + j < c.size(); ++j) c[i + j] += a[i] * b[j];
  return c;
}

class SmoothPoly : public ThickFunction {
 public:
  SmoothPoly(std::vector<Monomial> poly, double support) : poly_(std::move(poly)), support_(support) {}
  int leading_order() const override { return 0; }
  double support_radius() const override { return support_; }
  std::vector<double> breakpoints() const override { return {0.5 * support_}; }
  bool has_analytic_coeffs() const override { return true; }

  double eval(const Submanifold&, const TubePoint& p) const override {
    const double chi = cutoff(p.rho, support_);
    if (chi == 0.0) return 0.0;
    double s = 0.0;
    for (const auto& mono : poly_) {
      double v = mono.c;
      for (std::size_t i = 0; i < mono.powers.size(); ++i) v *= std::pow(p.x(i), mono.powers[i]);
      s += v;
    }
    return chi * s;
  }

  std::vector<double> coefficients(const Submanifold& M, const Vec& xi, const Vec& omega,
                                   int top) const override {
    if (top < 0) return {};
    const Vec v = frame(M, xi).normals * omega;
    std::vector<double> total(top + 1, 0.0);
    for (const auto& mono : poly_) {
      // (ξ_i + ρ v_i)^{p_i} multiplied out as a truncated series in ρ.
      std::vector<double> s{mono.c};
      for (std::size_t i = 0; i < mono.powers.size(); ++i) {
        for (int k = 0; k < mono.powers[i]; ++k) s = poly_mul(s, {xi(i), v(i)}, top);
      }
      for (std::size_t j = 0; j < s.size(); ++j) total[j] += s[j];
    }
    return total;
  }

  std::string describe() const override {
    std::ostringstream os;
    os << "smooth_poly(";
    for (std::size_t k = 0; k < poly_.size(); ++k) {
      if (k) os << "+";
      os << poly_[k].c;
      for (std::size_t i = 0; i < poly_[k].powers.size(); ++i)
        if (poly_[k].powers[i]) os << "*x" << (i + 1) << "^" << poly_[k].powers[i];
    }
    os << ")";
    return os.str();
  }

 private:
  std::vector<Monomial> poly_;
  double support_;
};

class SmoothField : public ThickFunction {
 public:
  SmoothField(ScalarField f, double support, std::string name)
      : f_(std::move(f)), support_(support), name_(std::move(name)) {}
  int leading_order() const override { return 0; }
  double support_radius() const override { return support_; }
  bool has_analytic_coeffs() const override { return true; }
  double eval(const Submanifold&, const TubePoint& p) const override { return f_(p.x); }
  std::vector<double> coefficients(const Submanifold& M, const Vec& xi, const Vec& omega,
                                   int top) const override {
    return taylor_coeffs_smooth(M, f_, xi, omega, std::min(top, 3));
  }
  std::string describe() const override { return name_; }

 private:
  ScalarField f_;
  double support_;
  std::string name_;
};

class AnalyticLogDensityGradient : public ThickFunction {
 public:
  explicit AnalyticLogDensityGradient(int i) : i_(i) {}
  int leading_order() const override { return 0; }
  bool has_analytic_coeffs() const override { return true; }
  double eval(const Submanifold& M, const TubePoint& p) const override {
    return M.log_density_gradient(p.foot, p.omega, p.rho, i_);
  }
  std::vector<double> coefficients(const Submanifold& M, const Vec& xi, const Vec& omega,
                                   int top) const override {
    if (top < 0) return {};
    return M.log_density_gradient_coeffs(xi, omega, i_, top);
  }
  std::string describe() const override { return "dlogJ" + std::to_string(i_ + 1); }

 private:
  int i_;
};

// log J with J = det_T(I + ρ Σ_k ω_k δn_k/δξ), the volume density of the
// tube map relative to ρ^{d-1} dρ dω dσ.
class LogDensity : public ThickFunction {
 public:
  int leading_order() const override { return 0; }
  bool has_analytic_coeffs() const override { return true; }

  static Mat shape_matrix(const Submanifold& M, const Vec& xi, const Vec& omega, const Mat& N) {
    const auto dN = frame_derivatives(M, xi);
    const int n = M.ambient_dim;
    Mat G = Mat::Zero(n, n);
    for (int i = 0; i < n; ++i) G.col(i) = dN[i] * omega;
    const Mat T = tangent_basis(N);
    return T.transpose() * G * T;
  }

  double eval(const Submanifold& M, const TubePoint& p) const override {
    const Mat A = shape_matrix(M, p.foot, p.omega, p.normals);
    return std::log((Mat::Identity(A.rows(), A.cols()) + p.rho * A).determinant());
  }

  std::vector<double> coefficients(const Submanifold& M, const Vec& xi, const Vec& omega,
                                   int top) const override {
    if (top < 0) return {};
    const Mat A = shape_matrix(M, xi, omega, frame(M, xi).normals);
    std::vector<double> c(top + 1, 0.0);
    Mat P = Mat::Identity(A.rows(), A.cols());
    for (int q = 1; q <= top; ++q) {
      P = P * A;
      c[q] = ((q % 2) ? 1.0 : -1.0) * P.trace() / q;
    }
    return c;
  }
  std::string describe() const override { return "logJ"; }
};

class Product : public ThickFunction {
 public:
  Product(FunctionPtr f, FunctionPtr g) : f_(std::move(f)), g_(std::move(g)) {}
  int leading_order() const override { return f_->leading_order() + g_->leading_order(); }
  double support_radius() const override { return std::min(f_->support_radius(), g_->support_radius()); }
  std::vector<double> breakpoints() const override {
    auto b = f_->breakpoints();
    for (double x : g_->breakpoints()) b.push_back(x);
    return b;
  }
  bool has_analytic_coeffs() const override {
    return f_->has_analytic_coeffs() && g_->has_analytic_coeffs();
  }
  double eval(const Submanifold& M, const TubePoint& p) const override {
    const double a = f_->eval(M, p);
    return a == 0.0 ? 0.0 : a * g_->eval(M, p);
  }
  std::vector<double> coefficients(const Submanifold& M, const Vec& xi, const Vec& omega,
                                   int top) const override {
    const int mf = f_->leading_order(), mg = g_->leading_order();
    const auto a = f_->coefficients(M, xi, omega, top - mg);
    const auto b = g_->coefficients(M, xi, omega, top - mf);
    if (a.empty() || b.empty()) return {};
    const int avail = std::min(mf + static_cast<int>(a.size()) - 1 + mg,
                               mg + static_cast<int>(b.size()) - 1 + mf);
    const int m = mf + mg;
    std::vector<double> c(std::max(0, std::min(top, avail) - m + 1), 0.0);
    for (std::size_t r = 0; r < c.size(); ++r)
      for (std::size_t s = 0; s <= r; ++s)
        if (s < a.size() && r - s < b.size()) c[r] += a[s] * b[r - s];
    return c;
  }
  std::string describe() const override { return "(" + f_->describe() + "*" + g_->describe() + ")"; }

 private:
  FunctionPtr f_, g_;
};

class Scaled : public ThickFunction {
 public:
  Scaled(double c, FunctionPtr f) : c_(c), f_(std::move(f)) {}
  int leading_order() const override { return f_->leading_order(); }
  double support_radius() const override { return f_->support_radius(); }
  std::vector<double> breakpoints() const override { return f_->breakpoints(); }
  bool has_analytic_coeffs() const override { return f_->has_analytic_coeffs(); }
  double eval(const Submanifold& M, const TubePoint& p) const override { return c_ * f_->eval(M, p); }
  std::vector<double> coefficients(const Submanifold& M, const Vec& xi, const Vec& omega,
                                   int top) const override {
    auto a = f_->coefficients(M, xi, omega, top);
    for (double& v : a) v *= c_;
    return a;
  }
  std::string describe() const override {
    std::ostringstream os;
    os << c_ << "*" << f_->describe();
    return os.str();
  }

 private:
  double c_;
  FunctionPtr f_;
};

class Derivative : public ThickFunction {
 public:
  Derivative(FunctionPtr f, int i, CoefficientMode mode) : f_(std::move(f)), i_(i), mode_(mode) {}
  int leading_order() const override { return f_->leading_order() - 1; }
  double support_radius() const override { return f_->support_radius(); }
  std::vector<double> breakpoints() const override { return f_->breakpoints(); }
  bool has_analytic_coeffs() const override { return mode_ == CoefficientMode::Expansion; }
  double eval(const Submanifold& M, const TubePoint& p) const override {
    return fd_derivative(M, *f_, p, i_);
  }
  std::vector<double> coefficients(const Submanifold& M, const Vec& xi, const Vec& omega,
                                   int top) const override {
    if (mode_ == CoefficientMode::Fitted) return fit_coefficients(M, xi, omega, top);
    if (mode_ == CoefficientMode::SmoothAmbient) return smooth_coefficients(M, xi, omega, top);
    return expand_derivative(M, *f_, i_, xi, omega, top).values;
  }
  std::string describe() const override {
    return "d" + std::to_string(i_ + 1) + "(" + f_->describe() + ")";
  }

 private:
  std::vector<double> smooth_coefficients(const Submanifold& M, const Vec& xi, const Vec& omega,
                                          int top) const {
    if (f_->leading_order() < 0) {
      throw Error(ErrorKind::InvalidArgument, "smooth-ambient coefficients need a smooth parent");
    }
    double half = std::min(M.tube_radius, f_->support_radius());
    for (double b : f_->breakpoints()) half = std::min(half, b);
    half *= 0.5;
    const double h = std::min(1e-3, 0.1 * half);
    const Vec e = unit_vector(M.ambient_dim, i_);
    const ScalarField value = [&](const Vec& x) { return f_->eval(M, locate(M, x)); };
    const ScalarField grad = [&](const Vec& x) {
      return central_derivative<double>([&](double t) { return value(x + t * e); }, 1, h, 3);
    };
    std::vector<double> a = line_taylor_fit(M, grad, xi, omega, std::max(top, 0), half);
    a.insert(a.begin(), 0.0);  // a_{-1}: the derivative of a smooth function has none
    if (top < -1) return {};
    a.resize(top + 2);
    return a;
  }

  FunctionPtr f_;
  int i_;
  CoefficientMode mode_;
};

}  // namespace

FunctionPtr make_laurent(int m, std::vector<LaurentTerm> terms, double support) {
  std::ostringstream os;
  os << "laurent(m=" << m;
  for (const auto& t : terms) os << "," << t.c << (t.factor.kind == AngularFactor::Kind::One ? "" : "*" + t.factor.describe());
  os << ")";
  return std::make_shared<Laurent>(m, std::move(terms), support, os.str());
}

FunctionPtr make_smooth_poly(std::vector<Monomial> poly, double support) {
  return std::make_shared<SmoothPoly>(std::move(poly), support);
}

FunctionPtr make_bump(double support) {
  return std::make_shared<Laurent>(0, std::vector<LaurentTerm>{{1.0, {}}}, support, "bump");
}

FunctionPtr make_normal_component(int k, double support) {
  AngularFactor g{AngularFactor::Kind::Normal, k};
  return std::make_shared<Laurent>(0, std::vector<LaurentTerm>{{1.0, g}}, support,
                                   "normal_component" + std::to_string(k + 1));
}

FunctionPtr make_smooth_field(ScalarField f, double support, std::string name) {
  return std::make_shared<SmoothField>(std::move(f), support, std::move(name));
}

FunctionPtr make_constant(double c) {
  std::ostringstream os;
  os << c;
  return std::make_shared<Laurent>(0, std::vector<LaurentTerm>{{c, {}}},
                                   std::numeric_limits<double>::infinity(), os.str());
}

FunctionPtr make_theta(int i) {
  AngularFactor g{AngularFactor::Kind::Theta, i};
  return std::make_shared<Laurent>(0, std::vector<LaurentTerm>{{1.0, g}},
                                   std::numeric_limits<double>::infinity(), g.describe());
}

FunctionPtr make_coordinate(int i) {
  AngularFactor xi{AngularFactor::Kind::Xi, i}, th{AngularFactor::Kind::Theta, i};
  return std::make_shared<Laurent>(0, std::vector<LaurentTerm>{{1.0, xi}, {1.0, th}},
                                   std::numeric_limits<double>::infinity(), "x" + std::to_string(i + 1));
}

FunctionPtr make_rho_power(int p) {
  return std::make_shared<Laurent>(p, std::vector<LaurentTerm>{{1.0, {}}},
                                   std::numeric_limits<double>::infinity(), "rho^" + std::to_string(p));
}

FunctionPtr make_log_density() { return std::make_shared<LogDensity>(); }

FunctionPtr make_log_density_gradient(const Submanifold& M, int i) {
  if (M.log_density_gradient && M.log_density_gradient_coeffs) {
    return std::make_shared<AnalyticLogDensityGradient>(i);
  }
  return make_derivative(make_log_density(), i);
}

FunctionPtr make_product(FunctionPtr f, FunctionPtr g) {
  return std::make_shared<Product>(std::move(f), std::move(g));
}

FunctionPtr make_scaled(double c, FunctionPtr f) { return std::make_shared<Scaled>(c, std::move(f)); }

FunctionPtr make_derivative(FunctionPtr f, int i, CoefficientMode mode) {
  return std::make_shared<Derivative>(std::move(f), i, mode);
}

}  // namespace tubecalc
