#pragma once

#include <functional>
#include <string>
#include <vector>

#include "kcontact/fields.hpp"
#include "kcontact/hdw.hpp"
#include "kcontact/hj.hpp"
#include "kcontact/maps.hpp"
#include "kcontact/sections.hpp"

namespace kcontact {

// max over samples and pairs α < β of ‖J_β Z_α − J_α Z_β‖∞ with exact Jacobians.
double commutator_defect(const BaseField& f, const Samples& xs);

struct IntegralSection {
  BaseMap map;
  double order_defect = 0.0;     // corner node: forward vs reversed direction order
  double commutator_max = 0.0;   // over the grid nodes
  bool commutator_warning = false;
};

// Integral section through `start` at the grid origin. Integrates with classic
// RK4 along direction 1, then direction 2 from every node reached, and so on.
// The corner node is recomputed with the directions reversed; a disagreement
// above order_tol raises IntegrabilityError, any state above 1e9 raises
// DivergenceError. A commutator above 1e−6 is only recorded as a warning.
IntegralSection integral_section(const BaseField& f, const std::vector<double>& start, const GridSpec& grid,
                                 int steps_per_cell = 4, double order_tol = 1e-8);

// Endpoint of flowing `start` by t along the directions in `order`.
std::vector<double> compose_flows(const BaseField& f, const std::vector<double>& start,
                                  const std::vector<double>& t, const std::vector<int>& order,
                                  int steps);

// ψ = γ∘σ node by node.
SolutionMap lift(const SectionZInd& g, const BaseMap& sigma);
SolutionMap lift(const SectionZDep& g, const BaseMap& sigma);  // σ in Q × ℝᵏ, stored (q, z)

struct EndToEndOptions {
  Samples hj_samples;            // points of Q (or Q × ℝᵏ, stored (q, z)) for the HJ stage
  double hj_tol = 1e-10;
  double map_tol = 1e-6;
  double order_tol = 1e-8;
  int steps_per_cell = 4;
  bool stop_on_hj_failure = true;  // false: still integrate and lift, report FAIL at the end
};

struct EndToEndReport {
  std::string mode;
  HJReport hj;
  double commutator_max = 0.0;
  double order_defect = 0.0;
  MapResidual map;
  IntegralSection sigma;
  SolutionMap psi;
  bool passed = false;
  std::string failed_stage;  // empty on PASS
};

// hj check → projection → integral section → lift → map residual (finite
// differences). Stops at the first stage that fails its tolerance. Library
// errors are rethrown tagged with the stage name.
EndToEndReport end_to_end(const ScalarField& h, const SectionZInd& g, Mode mode, const GridSpec& grid,
                          const std::vector<double>& start, const EndToEndOptions& opt);

// Same pipeline for a z-dependent section with gauge matrix C; the integral
// section lives on Q × ℝᵏ and `start` is (q, z) at the grid origin.
EndToEndReport end_to_end(const ScalarField& h, const SectionZDep& g, const GaugeMatrix& C, Mode mode,
                          const GridSpec& grid, const std::vector<double>& start,
                          const EndToEndOptions& opt);

}  // namespace kcontact
