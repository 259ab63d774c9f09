#pragma once

#include "tubecalc/catalog.hpp"
#include "tubecalc/quadrature.hpp"

#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace tubecalc {

class ThickDistribution;
using DistPtr = std::shared_ptr<const ThickDistribution>;

struct PfRhoLambda {
  double lambda = 0.0;
  bool integer = false;  // |λ - round(λ)| < 1e-9
};

// Pf(ψ) = ψ·Pf(1).
struct PfPsi {
  FunctionPtr psi;
};

// g δ^{[j]} with thick derivatives ∂_{axes[0]}, ∂_{axes[1]}, ... applied.
struct ThickDelta {
  AngularFactor g;
  int degree = 0;
  std::vector<int> axes;
};

// ψ·T for a multiplier ψ.
struct Multiplied {
  FunctionPtr psi;
  DistPtr inner;
};

struct LinearCombination {
  std::vector<std::pair<double, DistPtr>> terms;
};

class ThickDistribution {
 public:
  using Node = std::variant<PfRhoLambda, PfPsi, ThickDelta, Multiplied, LinearCombination>;
  explicit ThickDistribution(Node n) : node(std::move(n)) {}
  Node node;
  std::string describe() const;
};

DistPtr pf_rho_lambda(double lambda);
DistPtr pf_psi(FunctionPtr psi);
DistPtr thick_delta(AngularFactor g, int degree);
DistPtr multiplied(FunctionPtr psi, DistPtr inner);
// Flattens nested combinations and drops zero coefficients.
DistPtr combination(std::vector<std::pair<double, DistPtr>> terms);

struct PairOptions {
  std::optional<double> eta;  // default: support_radius / 2
  QuadratureLevels levels;
  bool self_check = true;     // recompute at η/2
  int extra_orders = 10;      // expansion orders used for the analytic tail below η/16
};

struct PairingResult {
  double value = 0.0;
  bool has_eta = false;
  double eta_used = 0.0;
  double value_eta_half = 0.0;
  double abs_diff = 0.0;
  double tolerance = 0.0;
  bool eta_check_pass = true;
};

PairingResult pair(const Submanifold& M, const DistPtr& T, const FunctionPtr& phi,
                   const PairOptions& opts = {});

DistPtr derivative(const Submanifold& M, const DistPtr& T, int i);

DistPtr leibniz(const Submanifold& M, const FunctionPtr& psi, const DistPtr& T, int i);

struct ResidueResult {
  double value = 0.0;         // |S^{d-1}|·⟨δ^{[-k-d]}, φ⟩
  double lambda_limit = 0.0;  // Richardson-extrapolated (λ-k)⟨Pf(ρ^λ), φ⟩
};

ResidueResult residue(const Submanifold& M, int k, const FunctionPtr& phi, const PairOptions& opts = {});

struct ProjectionResult {
  double value = 0.0;     // route (a)
  double multilayer = 0.0;  // route (b), equal to (a) when not applicable
  bool multilayer_applicable = false;
};

ProjectionResult project_pair(const Submanifold& M, const DistPtr& T, const ScalarField& phi,
                              double support, const PairOptions& opts = {});

// Largest |⟨g(ξ,·), ω^α⟩| over Σ nodes and |α| = j.
double max_fiber_moment(const Submanifold& M, const AngularFactor& g, int j, const QuadratureLevels& levels);

}  // namespace tubecalc
