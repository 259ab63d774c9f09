#include "tubecalc/scenario.hpp"

#include "tubecalc/distributions.hpp"
#include "tubecalc/shapes.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

namespace tubecalc {

namespace {

using nlohmann::json;

[[noreturn]] void schema(const std::string& key, const std::string& msg) {
  throw Error(ErrorKind::SchemaError, key + ": " + msg);
}

const json& require(const json& obj, const std::string& key, const std::string& path) {
  if (!obj.is_object()) schema(path, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) schema(path + "." + key, "missing");
  return *it;
}

double number(const json& v, const std::string& path) {
  if (!v.is_number()) schema(path, "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) schema(path, "expected a finite number");
  return x;
}

int integer(const json& v, const std::string& path) {
  if (!v.is_number_integer()) schema(path, "expected an integer");
  return v.get<int>();
}

std::string text(const json& v, const std::string& path) {
  if (!v.is_string()) schema(path, "expected a string");
  return v.get<std::string>();
}

double number_or(const json& obj, const std::string& key, double fallback, const std::string& path) {
  auto it = obj.find(key);
  return it == obj.end() ? fallback : number(*it, path + "." + key);
}

void reject_unknown(const json& obj, std::initializer_list<const char*> known, const std::string& path) {
  for (const auto& [k, v] : obj.items()) {
    if (std::none_of(known.begin(), known.end(), [&](const char* s) { return k == s; })) {
      schema(path + "." + k, "unknown key");
    }
  }
}

struct Context {
  Shape shape;
  std::string label;
};

Context parse_shape(const json& spec, const std::string& path) {
  const std::string id = text(require(spec, "shape", path), path + ".shape");
  const double r = number(require(spec, "radius", path), path + ".radius");
  if (!(r > 0)) schema(path + ".radius", "must be positive");
  std::ostringstream label;
  if (id == "sphere") {
    reject_unknown(spec, {"shape", "radius", "ambient_dim"}, path);
    int n = 3;
    if (spec.contains("ambient_dim")) n = integer(spec["ambient_dim"], path + ".ambient_dim");
    if (n < 2 || n > kMaxDim) schema(path + ".ambient_dim", "must be between 2 and 8");
    label << "sphere(n=" << n << ",r=" << r << ")";
    return {make_sphere(n, r), label.str()};
  }
  if (id == "circle3d") {
    reject_unknown(spec, {"shape", "radius"}, path);
    label << "circle3d(R=" << r << ")";
    return {make_circle3d(r), label.str()};
  }
  schema(path + ".shape", "unknown shape '" + id + "'");
}

AngularFactor parse_factor(const Submanifold& M, const json& v, const std::string& path) {
  AngularFactor g;
  try {
    g = AngularFactor::parse(text(v, path));
  } catch (const Error&) {
    schema(path, "unknown angular factor '" + v.get<std::string>() + "'");
  }
  using K = AngularFactor::Kind;
  const int limit = g.kind == K::Omega ? M.codim : M.ambient_dim;
  if (g.kind != K::One && g.index >= limit) schema(path, "index out of range");
  if (g.kind == K::Omega1SqMinusHalf && M.codim < 2) schema(path, "needs codimension >= 2");
  return g;
}

double parse_support(const Submanifold& M, const json& spec, const std::string& path) {
  const double s = number(require(spec, "support_radius", path), path + ".support_radius");
  if (!(s > 0)) schema(path + ".support_radius", "must be positive");
  if (s > M.tube_radius) schema(path + ".support_radius", "exceeds the tube radius");
  return s;
}

FunctionPtr parse_testfn(const Submanifold& M, const json& spec, const std::string& path) {
  const std::string kind = text(require(spec, "testfn", path), path + ".testfn");
  if (kind == "laurent") {
    reject_unknown(spec, {"testfn", "m", "terms", "support_radius"}, path);
    const int m = integer(require(spec, "m", path), path + ".m");
    const json& terms = require(spec, "terms", path);
    if (!terms.is_array() || terms.empty()) schema(path + ".terms", "expected a non-empty array");
    std::vector<LaurentTerm> out;
    for (std::size_t t = 0; t < terms.size(); ++t) {
      const std::string tp = path + ".terms[" + std::to_string(t) + "]";
      if (terms[t].is_number()) {
        out.push_back({number(terms[t], tp), {}});
        continue;
      }
      reject_unknown(terms[t], {"c", "g"}, tp);
      LaurentTerm lt{number(require(terms[t], "c", tp), tp + ".c"), {}};
      if (terms[t].contains("g")) lt.factor = parse_factor(M, terms[t]["g"], tp + ".g");
      out.push_back(lt);
    }
    return make_laurent(m, std::move(out), parse_support(M, spec, path));
  }
  if (kind == "smooth_poly") {
    reject_unknown(spec, {"testfn", "coeffs", "support_radius"}, path);
    const json& coeffs = require(spec, "coeffs", path);
    if (!coeffs.is_array() || coeffs.empty()) schema(path + ".coeffs", "expected a non-empty array");
    std::vector<Monomial> poly;
    for (std::size_t t = 0; t < coeffs.size(); ++t) {
      const std::string tp = path + ".coeffs[" + std::to_string(t) + "]";
      reject_unknown(coeffs[t], {"c", "powers"}, tp);
      Monomial mono{number(require(coeffs[t], "c", tp), tp + ".c"), {}};
      const json& pw = require(coeffs[t], "powers", tp);
      if (!pw.is_array() || static_cast<int>(pw.size()) != M.ambient_dim) {
        schema(tp + ".powers", "expected " + std::to_string(M.ambient_dim) + " exponents");
      }
      for (std::size_t k = 0; k < pw.size(); ++k) {
        const int e = integer(pw[k], tp + ".powers[" + std::to_string(k) + "]");
        if (e < 0) schema(tp + ".powers[" + std::to_string(k) + "]", "must be non-negative");
        mono.powers.push_back(e);
      }
      poly.push_back(std::move(mono));
    }
    return make_smooth_poly(std::move(poly), parse_support(M, spec, path));
  }
  if (kind == "bump") {
    reject_unknown(spec, {"testfn", "support_radius"}, path);
    return make_bump(parse_support(M, spec, path));
  }
  if (kind == "normal_component") {
    reject_unknown(spec, {"testfn", "index", "support_radius"}, path);
    if (M.codim != 1) schema(path + ".testfn", "normal_component needs a hypersurface");
    const int k = integer(require(spec, "index", path), path + ".index");
    if (k < 1 || k > M.ambient_dim) schema(path + ".index", "index out of range");
    return make_normal_component(k - 1, parse_support(M, spec, path));
  }
  schema(path + ".testfn", "unknown test function '" + kind + "'");
}

FunctionPtr parse_multiplier(const Submanifold& M, const json& v, const std::string& path) {
  const std::string name = text(v, path);
  if (name == "one") return make_constant(1.0);
  for (const char* pre : {"x", "theta"}) {
    const std::string p(pre);
    if (name.size() > p.size() && name.compare(0, p.size(), p) == 0 &&
        name.find_first_not_of("0123456789", p.size()) == std::string::npos) {
      const int i = std::stoi(name.substr(p.size()));
      if (i < 1 || i > M.ambient_dim) schema(path, "index out of range");
      return p == "x" ? make_coordinate(i - 1) : make_theta(i - 1);
    }
  }
  schema(path, "unknown multiplier '" + name + "'");
}

struct ParsedDist {
  DistPtr dist;
  int axis = 0;  // outermost derivative axis, 1-based
};

ParsedDist parse_dist(const Submanifold& M, const json& spec, const std::string& path) {
  const std::string kind = text(require(spec, "dist", path), path + ".dist");
  if (kind == "pf_rho_lambda") {
    reject_unknown(spec, {"dist", "lambda"}, path);
    return {pf_rho_lambda(number(require(spec, "lambda", path), path + ".lambda"))};
  }
  if (kind == "thick_delta") {
    reject_unknown(spec, {"dist", "degree", "g"}, path);
    const int j = spec.contains("degree") ? integer(spec["degree"], path + ".degree") : 0;
    const AngularFactor g = spec.contains("g") ? parse_factor(M, spec["g"], path + ".g") : AngularFactor{};
    return {thick_delta(g, j)};
  }
  if (kind == "derivative") {
    reject_unknown(spec, {"dist", "axis", "of"}, path);
    const int axis = integer(require(spec, "axis", path), path + ".axis");
    if (axis < 1 || axis > M.ambient_dim) schema(path + ".axis", "axis out of range");
    const ParsedDist inner = parse_dist(M, require(spec, "of", path), path + ".of");
    return {derivative(M, inner.dist, axis - 1), axis};
  }
  if (kind == "pf_psi") {
    reject_unknown(spec, {"dist", "psi"}, path);
    return {pf_psi(parse_multiplier(M, require(spec, "psi", path), path + ".psi"))};
  }
  if (kind == "combination") {
    reject_unknown(spec, {"dist", "terms"}, path);
    const json& terms = require(spec, "terms", path);
    if (!terms.is_array() || terms.empty()) schema(path + ".terms", "expected a non-empty array");
    std::vector<std::pair<double, DistPtr>> out;
    for (std::size_t t = 0; t < terms.size(); ++t) {
      const std::string tp = path + ".terms[" + std::to_string(t) + "]";
      reject_unknown(terms[t], {"c", "of"}, tp);
      out.emplace_back(number(require(terms[t], "c", tp), tp + ".c"),
                       parse_dist(M, require(terms[t], "of", tp), tp + ".of").dist);
    }
    return {combination(std::move(out))};
  }
  schema(path + ".dist", "unknown distribution '" + kind + "'");
}

QuadratureLevels parse_levels(const json& scenario) {
  QuadratureLevels l;
  auto it = scenario.find("quadrature");
  if (it == scenario.end()) return l;
  const std::string path = "quadrature";
  if (!it->is_object()) schema(path, "expected an object");
  reject_unknown(*it, {"sigma_level", "fiber_level", "radial_points"}, path);
  if (it->contains("sigma_level")) l.sigma_level = integer((*it)["sigma_level"], path + ".sigma_level");
  if (it->contains("fiber_level")) l.fiber_level = integer((*it)["fiber_level"], path + ".fiber_level");
  if (it->contains("radial_points")) l.radial_points = integer((*it)["radial_points"], path + ".radial_points");
  if (l.sigma_level < -1 || l.sigma_level > 255) schema(path + ".sigma_level", "out of range");
  if (l.fiber_level < 1 || l.fiber_level > 64) schema(path + ".fiber_level", "out of range");
  if (l.radial_points < 4 || l.radial_points > 512) schema(path + ".radial_points", "out of range");
  return l;
}

struct Job {
  std::string id;
  ParsedDist dist;
  FunctionPtr phi;
  std::optional<double> expected;
  double expected_tol = 0.0;
};

std::string fmt(double x) {
  if (std::isnan(x)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string json_number(double x) { return std::isfinite(x) ? fmt(x) : "null"; }

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
  return out + "\"";
}

}  // namespace

Report run_scenario(const json& scenario) {
  if (!scenario.is_object()) schema("scenario", "expected an object");
  reject_unknown(scenario, {"shape", "quadrature", "eta", "tolerance", "pairings", "id", "dist", "testfn", "expected"},
                 "scenario");
  const Context ctx = parse_shape(require(scenario, "shape", "scenario"), "shape");
  const Submanifold& M = ctx.shape.manifold;
  PairOptions opts;
  opts.levels = parse_levels(scenario);
  if (scenario.contains("eta")) {
    opts.eta = number(scenario["eta"], "eta");
    if (!(*opts.eta > 0)) schema("eta", "must be positive");
  }
  double eta_rel = 1e-7, expected_rel = 1e-6;
  if (scenario.contains("tolerance")) {
    const json& tol = scenario["tolerance"];
    if (!tol.is_object()) schema("tolerance", "expected an object");
    reject_unknown(tol, {"eta_rel", "expected_rel"}, "tolerance");
    eta_rel = number_or(tol, "eta_rel", eta_rel, "tolerance");
    expected_rel = number_or(tol, "expected_rel", expected_rel, "tolerance");
  }

  // Everything is parsed before anything is computed.
  std::vector<Job> jobs;
  auto add_job = [&](const json& spec, const std::string& path, const std::string& fallback_id) {
    Job job;
    job.id = spec.contains("id") ? text(spec["id"], path + ".id") : fallback_id;
    job.dist = parse_dist(M, require(spec, "dist", path), path + ".dist");
    job.phi = parse_testfn(M, require(spec, "testfn", path), path + ".testfn");
    if (spec.contains("expected")) {
      job.expected = number(spec["expected"], path + ".expected");
      job.expected_tol = expected_rel * std::max(1.0, std::abs(*job.expected));
    }
    jobs.push_back(std::move(job));
  };
  if (scenario.contains("pairings")) {
    if (scenario.contains("dist") || scenario.contains("testfn")) {
      schema("pairings", "give either a pairings list or a single dist/testfn");
    }
    const json& list = scenario["pairings"];
    if (!list.is_array() || list.empty()) schema("pairings", "expected a non-empty array");
    for (std::size_t k = 0; k < list.size(); ++k) {
      const std::string path = "pairings[" + std::to_string(k) + "]";
      reject_unknown(list[k], {"id", "dist", "testfn", "expected"}, path);
      add_job(list[k], path, "pairing" + std::to_string(k + 1));
    }
  } else {
    add_job(scenario, "scenario", "pairing1");
  }
  std::set<std::string> ids;
  for (const Job& j : jobs) {
    if (!ids.insert(j.id).second) schema("id", "duplicate pairing id '" + j.id + "'");
  }

  Report report;
  report.scenario = scenario;
  for (const Job& job : jobs) {
    const PairingResult pr = pair(M, job.dist.dist, job.phi, opts);
    CheckRow row;
    row.check_id = job.id;
    row.shape = ctx.label;
    row.distribution = job.dist.dist->describe();
    row.testfn = job.phi->describe();
    row.axis = job.dist.axis;
    row.value = pr.value;
    if (pr.has_eta) {
      row.eta = pr.eta_used;
      row.value_eta_half = pr.value_eta_half;
    }
    if (job.expected) {
      row.expected = *job.expected;
      row.abs_diff = std::abs(pr.value - *job.expected);
      row.tolerance = job.expected_tol;
      row.pass = row.abs_diff <= row.tolerance;
    } else {
      row.abs_diff = pr.has_eta ? pr.abs_diff : 0.0;
      row.tolerance = eta_rel * (1.0 + std::abs(pr.value));
      row.pass = !pr.has_eta || pr.abs_diff < row.tolerance;
    }
    if (job.expected && pr.has_eta) {
      row.pass = row.pass && pr.abs_diff < eta_rel * (1.0 + std::abs(pr.value));
    }
    row.pass = row.pass && std::isfinite(row.value);
    report.pass = report.pass && row.pass;
    report.rows.push_back(std::move(row));
  }
  return report;
}

Report run_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::SchemaError, "cannot open scenario " + path);
  json scenario;
  try {
    scenario = json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::SchemaError, std::string("malformed JSON: ") + e.what());
  }
  return run_scenario(scenario);
}

Report validation_report(const std::vector<CriterionResult>& results) {
  Report report;
  report.scenario = json::object();
  report.scenario["validate"] = true;
  for (const CriterionResult& r : results) {
    report.pass = report.pass && r.pass;
    for (const CheckRow& row : r.rows) report.rows.push_back(row);
  }
  std::stable_sort(report.rows.begin(), report.rows.end(),
                   [](const CheckRow& a, const CheckRow& b) { return a.check_id < b.check_id; });
  return report;
}

std::string format_csv(const Report& report) {
  std::string out = "check_id,shape,distribution,testfn,axis,value,eta,value_eta_half,abs_diff,tolerance,pass\n";
  for (const CheckRow& r : report.rows) {
    out += csv_field(r.check_id) + "," + csv_field(r.shape) + "," + csv_field(r.distribution) + "," +
           csv_field(r.testfn) + "," + std::to_string(r.axis) + "," + fmt(r.value) + "," + fmt(r.eta) + "," +
           fmt(r.value_eta_half) + "," + fmt(r.abs_diff) + "," + fmt(r.tolerance) + "," +
           (r.pass ? "true" : "false") + "\n";
  }
  return out;
}

std::string format_json(const Report& report) {
  std::string out = "{\n  \"scenario\": " + report.scenario.dump() + ",\n  \"rows\": [";
  for (std::size_t k = 0; k < report.rows.size(); ++k) {
    const CheckRow& r = report.rows[k];
    out += k ? ",\n    {" : "\n    {";
    out += "\"check_id\": " + json(r.check_id).dump();
    out += ", \"shape\": " + json(r.shape).dump();
    out += ", \"distribution\": " + json(r.distribution).dump();
    out += ", \"testfn\": " + json(r.testfn).dump();
    out += ", \"axis\": " + std::to_string(r.axis);
    out += ", \"value\": " + json_number(r.value);
    out += ", \"eta\": " + json_number(r.eta);
    out += ", \"value_eta_half\": " + json_number(r.value_eta_half);
    out += ", \"abs_diff\": " + json_number(r.abs_diff);
    out += ", \"tolerance\": " + json_number(r.tolerance);
    out += std::string(", \"pass\": ") + (r.pass ? "true" : "false") + "}";
  }
  std::size_t passed = 0;
  for (const CheckRow& r : report.rows) passed += r.pass;
  out += report.rows.empty() ? "],\n" : "\n  ],\n";
  out += "  \"summary\": {\"rows\": " + std::to_string(report.rows.size()) + ", \"passed\": " +
         std::to_string(passed) + ", \"pass\": " + (report.pass ? "true" : "false") + "}\n}\n";
  return out;
}

void write_report(const Report& report, ReportFormat format, const std::string& path) {
  const std::string body = format == ReportFormat::Csv ? format_csv(report) : format_json(report);
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::IoError, "cannot write " + tmp.string());
    out << body;
    out.close();
    if (!out) {
      std::error_code ec;
      fs::remove(tmp, ec);
      throw Error(ErrorKind::IoError, "write failed for " + tmp.string());
    }
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw Error(ErrorKind::IoError, "cannot move report into " + path);
  }
}

int exit_code_for(const std::exception& e) {
  if (const auto* err = dynamic_cast<const Error*>(&e)) {
    return err->kind() == ErrorKind::SchemaError ? 2 : 3;
  }
  if (dynamic_cast<const nlohmann::json::exception*>(&e)) return 2;
  return 3;
}

}  // namespace tubecalc
