#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "kcontact/fields.hpp"
#include "kcontact/geometry.hpp"
#include "kcontact/maps.hpp"

namespace kcontact {

enum class FieldKind { standard, evolution, custom };

struct KVectorField {
  ChartSpec chart;
  std::function<KTangent(const DarbouxPoint&)> at;
  FieldKind kind = FieldKind::custom;
  std::optional<ScalarField> hamiltonian;
  std::string representative;  // names the gauge choice, reported alongside results
};

// Residual groups of the HdDW system at one point.
struct HdwResidual {
  double r_q = 0.0;
  double r_p = 0.0;
  double r_z = 0.0;
  double max() const;
};

// Equal-split representative: (X_β)ⁱ = ∂h/∂pᵢᵝ, diagonal momentum and z entries
// carry 1/k of the respective trace, all off-diagonal entries are zero.
KVectorField canonical_kvf(const ScalarField& h, Mode mode);
KTangent canonical_ktangent(const ScalarField& h, Mode mode, const DarbouxPoint& pt);

// Residual of the pointwise HdDW equations for the k-tangent x at pt. The same
// function checks maps: pass the derivatives ∂ψ/∂tᵅ as x.
HdwResidual hdw_residual(const ScalarField& h, Mode mode, const DarbouxPoint& pt, const KTangent& x);
HdwResidual kvf_residual(const KVectorField& kvf, const ScalarField& h, Mode mode, const DarbouxPoint& pt);

// Basis of ker χ at pt: off-diagonal unit momentum and z insertions plus
// trace-balanced diagonal pairs, (n+1)(k²−1) elements in total.
using GaugeElement = KTangent;
std::vector<GaugeElement> gauge_basis(const ChartSpec& chart, const DarbouxPoint& pt);

// kvf + g, with g supplied per point.
KVectorField add_gauge(const KVectorField& kvf, std::function<GaugeElement(const DarbouxPoint&)> g);

struct MapResidual {
  GridSpec grid;
  std::vector<HdwResidual> nodes;
  HdwResidual max;
};

// HdDW residuals of ψ on every node. Derivatives come from the closed form when
// present, otherwise from finite differences (needs ≥ 3 nodes per direction).
MapResidual map_residual(const SolutionMap& psi, const ScalarField& h, Mode mode);

// Canonical k-symplectic representative for H on ⊕ᵏT*Q (z-blocks zero).
KVectorField ksymplectic_kvf(const ScalarField& H);

// Σ_α ι_{X_α} ωᵅ − dH at pt, as a sup-norm; ωᵅ = Σᵢ dqⁱ ∧ dpᵢᵅ.
double ksymplectic_defect(const ScalarField& H, const KTangent& x, const DarbouxPoint& pt);

// E_α = X_α + θᵅ(X_α) ∂/∂zᵅ. Each evaluation first checks the k-symplectic
// equation for X to tol and that H does not depend on z; violations throw ContractError.
KVectorField evolution_lift(const ScalarField& H, const KVectorField& x, double tol = 1e-10);

// Residuals of Σ_α ∂_α Pᵢᵅ = Σ_α (X_α)ᵢᵅ(q, P, 0) for a map into Q, where
// P = P(q, ∂q/∂t) comes from fibre inversion and X is the canonical field in
// the given mode. h must be affine in z (checked on random points) and regular.
struct SecondOrderResidual {
  GridSpec grid;                 // interior nodes
  int n = 0;                     // residual components per node
  std::vector<double> values;    // signed, n per node
  std::vector<double> A;         // the constant ∂h/∂zᵅ
  double max_abs() const;
};

SecondOrderResidual second_order_residual(const ScalarField& h, const BaseMap& qmap, Mode mode,
                                          unsigned seed = 12345);

// ∂h/∂zᵅ if constant over `samples` random points in [−1, 1]^dim (to tol); else ContractError.
std::vector<double> affine_z_coefficients(const ScalarField& h, int samples = 50, double tol = 1e-10,
                                          unsigned seed = 12345);

}  // namespace kcontact
