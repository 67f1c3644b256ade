#pragma once

#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "kcontact/fields.hpp"
#include "kcontact/maps.hpp"
#include "kcontact/sections.hpp"

namespace kcontact {

struct Offender {
  Sample point;
  double value = 0.0;
};

struct HJReport {
  std::string mode;  // classical-zind | evolution-zind | classical-zdep | evolution-zdep
  double sup_residual = 0.0;
  std::size_t sample_count = 0;
  std::vector<Offender> worst;  // largest residuals first, at most five
  std::string gauge;            // which C was used (z-dependent checks only)
};

// Projected k-vector field on Q: component α is Σᵢ (∂h/∂pᵢᵅ ∘ γ) ∂/∂qⁱ. It reads
// only ∂h/∂p along γ, so every gauge representative projects to it.
BaseField project_Q(const ScalarField& h, const SectionZInd& g);

// sup |h∘γ|; γ must be holonomic on the samples (else ContractError).
HJReport hj_classical_zind(const ScalarField& h, const SectionZInd& g, const Samples& qs,
                           double holonomic_tol = 1e-10);

// sup ‖∇_q(h∘γ)‖∞; γ must be holonomic on the samples.
HJReport hj_evolution_zind(const ScalarField& h, const SectionZInd& g, const Samples& qs,
                           double holonomic_tol = 1e-10);

// Γ_β = ∂(h∘γ)/∂z^β, the derivative of h along Tγ(∂/∂z^β).
std::vector<double> gamma_beta(const ScalarField& h, const SectionZDep& g, const std::vector<double>& q,
                               const std::vector<double>& z);

// Ξ_j = ∂(h∘γ)/∂qʲ + Σ_β Γ_β γⱼᵝ, the defect of the naive z-dependent equation.
std::vector<double> naive_defect(const ScalarField& h, const SectionZDep& g, const std::vector<double>& q,
                                 const std::vector<double>& z);

// C_α^β as a k×k matrix (row α, column β) at each (q, z).
struct GaugeMatrix {
  std::function<Eigen::MatrixXd(const std::vector<double>&, const std::vector<double>&)> C;
  std::string name;
};

// sup over samples and j of |Ξ_j + Σ_{α,β} C_α^β ∂γⱼᵅ/∂z^β|. Preconditions:
// maximal coisotropy on the samples (≤ coiso_tol) and the trace condition of
// the mode (tr C = −h∘γ standard, 0 evolution); violations throw ContractError.
HJReport hj_zdep_residual(const ScalarField& h, const SectionZDep& g, const GaugeMatrix& C, Mode mode,
                          const Samples& qz, double coiso_tol = 1e-10);

// Diagonal C for n = 1: its entries sum to the trace the mode prescribes and
// Σ_α C_α^α ∂γᵅ/∂zᵅ = −Ξ. The minimum-norm solution of these two rows is
// returned (unique for k = 2 with distinct coefficients); for k = 1 the trace
// alone fixes C. Throws NoSolutionError when the rows are inconsistent.
Eigen::MatrixXd solve_diagonal_C(const ScalarField& h, const SectionZDep& g, Mode mode,
                                 const std::vector<double>& q, const std::vector<double>& z);

GaugeMatrix diagonal_gauge(const ScalarField& h, const SectionZDep& g, Mode mode);

// Projected k-vector field on Q × ℝᵏ for a z-dependent section and a gauge
// matrix: q-part ∂h/∂p∘γ as in project_Q, z^β-part Σⱼ γⱼᵝ Uʲ_α + C_α^β.
// Stored at double level only (C is a plain numeric callable).
BaseField project_QZ(const ScalarField& h, const SectionZDep& g, const GaugeMatrix& C);

// Coordinates (q, λ, z) of the fibre-preserving chart a complete solution defines.
struct FamilyCoords {
  std::vector<double> q;
  std::vector<double> lambda;
  std::vector<double> z;
};

// Φ(q, λ, z) = (q, γ_λ(q, z), z) with λ ∈ ℝᵏⁿ, and optionally its inverse.
struct CompleteSolutionFamily {
  int n = 1;
  int k = 1;
  std::string name;
  std::function<SectionZDep(const std::vector<double>& lambda)> section;
  std::function<FamilyCoords(const DarbouxPoint&)> inverse;
  std::vector<double> param_lo, param_hi;
  std::vector<double> base_lo, base_hi;  // box in Q × ℝᵏ
};

struct ParamResult {
  std::vector<double> lambda;
  double sup_residual = 0.0;
  double roundtrip = 0.0;
  std::string error;
  bool passed = false;
};

struct CompleteReport {
  HJReport hj;
  double roundtrip_max = 0.0;
  bool inverse_checked = false;
  std::vector<ParamResult> per_param;
  bool passed = false;
};

// Runs hj_zdep_residual with the diagonal gauge for every parameter point and
// checks Φ⁻¹∘Φ on the base samples.
CompleteReport verify_complete(const CompleteSolutionFamily& family, const ScalarField& h, Mode mode,
                               const Samples& params, const Samples& base, double tol = 1e-10,
                               double roundtrip_tol = 1e-12);

}  // namespace kcontact
