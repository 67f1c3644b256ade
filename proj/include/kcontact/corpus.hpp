#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "kcontact/fields.hpp"
#include "kcontact/hj.hpp"
#include "kcontact/maps.hpp"
#include "kcontact/sections.hpp"

namespace kcontact {

enum class SectionKind { zind, zdep, family };
const char* to_string(SectionKind k);

// One candidate section of an example, valid or deliberately broken.
struct SectionEntry {
  std::string key;
  std::string description;
  SectionKind kind = SectionKind::zind;
  Mode mode = Mode::standard;
  bool valid = true;
  // false: the gauge solves the HJ equation but its projected flows do not
  // commute, so simulate stops with an integrability error.
  bool integrable = true;
  Params overrides;  // parameter values this entry needs, applied over the defaults

  std::function<SectionZInd(const Params&)> zind;
  std::function<SectionZDep(const Params&)> zdep;
  // Explicit gauge matrix for z-dependent entries; empty means the diagonal solve.
  std::function<GaugeMatrix(const Params&, const ScalarField&)> gauge;
  std::function<CompleteSolutionFamily(const Params&)> family;

  // Sample box in Q (zind) or Q × ℝᵏ (zdep); families carry their own boxes.
  std::vector<double> lo, hi;
  // Start of the integral section at the grid origin: q (zind) or (q, z) (zdep).
  std::function<std::vector<double>(const Params&)> start;
  std::string solution;  // closed form this section reproduces when integrated from `start`
};

// A closed-form solution with the constraint its parameters must satisfy.
struct SolutionEntry {
  std::string key;
  std::string description;
  Mode mode = Mode::standard;
  bool full = true;  // false: only q(t) is meaningful, the lift is not provided
  Params overrides;
  // Throws ConfigError naming the violated relation when params do not fit.
  std::function<ClosedForm(const Params&)> make;
  GridSpec grid;       // default self-test grid
  double tolerance = 1e-10;
};

// A shipped negative case: command, target and the outcome it must produce.
struct NegativeCase {
  std::string name;
  std::string command;  // check-hj | simulate
  std::string section;
  Params sets;
  std::optional<Mode> mode;
  std::optional<GridSpec> grid;
  std::string verdict;  // FAIL, or the error kind expected
  int exit_code = 1;
};

// Second-order jet of a closed form at t: ψ, ∂ψ/∂tᵅ and ∂²q⁰/∂tᵅ∂tᵝ (k×k, row-major).
struct Jet {
  std::vector<double> t;
  DarbouxPoint psi;
  KTangent dpsi;
  std::vector<double> d2u;
};
Jet jet_at(const ClosedForm& cf, const std::vector<double>& t);

struct ExampleSystem {
  std::string name;
  std::string title;
  ChartSpec chart;
  Params defaults;
  std::vector<std::string> optional;  // accepted names without a default (derived when absent)
  std::function<ScalarField(const Params&)> hamiltonian;
  bool affine_in_z = true;
  bool regular = true;
  std::vector<SectionEntry> sections;
  std::vector<SolutionEntry> solutions;
  std::string pde;  // human-readable form of pde_residual
  std::function<double(const Jet&, const Params&)> pde_residual;
  std::vector<NegativeCase> negatives;
  std::map<std::string, std::string> expected;  // check name -> verdict

  const SectionEntry& section(const std::string& key) const;
  const SolutionEntry& solution(const std::string& key) const;
  // defaults, then overrides, then user values; unknown user names are rejected.
  Params resolve(const Params& user, const Params& overrides = {}) const;
};

const std::vector<std::string>& example_names();
ExampleSystem load(const std::string& name);

// Closed form of a named solution after resolving parameters.
ClosedForm analytic(const std::string& example, const std::string& solution, const Params& user = {});

struct LineParams {
  double kappa = 0.0;
  double lambda = 0.0;
  double epsilon = 0.0;
};
LineParams telegrapher_params_from_line(double R, double L, double G, double C_cap);

// Real roots of (c² − κ⁻¹)a² + λc·a + ε = 0, the condition for the exponential
// ansatz a·u²/2 to solve the classical equation; ascending.
std::vector<double> telegrapher_roots(double kappa, double lambda, double epsilon, double c);

// Fields of the covariant irreversible thermodynamics model on a k-grid, one
// value per node. T is stored T[λ·k + μ].
struct ThermoFields {
  GridSpec grid;
  std::vector<double> xi, V;
  std::vector<std::vector<double>> beta, N, T, P, S;
};

struct ThermoResidual {
  std::vector<double> constitutive;       // max over the q-block per node
  std::vector<double> balance;            // max over the p-block per node
  std::vector<double> entropy_standard;   // signed Σ∂S̃^μ/∂x^μ − (Σp∂h/∂p − h)
  std::vector<double> entropy_evolution;  // signed Σ∂S̃^μ/∂x^μ − Σp∂h/∂p
  std::vector<double> h;                  // h at each node
  double constitutive_max = 0.0, balance_max = 0.0, entropy_standard_max = 0.0, entropy_evolution_max = 0.0;
};

// Phase point of the thermodynamic chart at one node.
DarbouxPoint thermo_point(const ThermoFields& f, std::size_t node);
ThermoResidual thermo_balance_residual(const ThermoFields& f, const ScalarField& h);

}  // namespace kcontact
