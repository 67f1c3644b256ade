#pragma once

#include <vector>

#include <Eigen/Dense>

#include "kcontact/types.hpp"

namespace kcontact {

// Throws ShapeError unless x has the chart's block sizes and finite entries.
void check_conforms(const ChartSpec& chart, const PhaseVec<double>& x, const char* what = "point");
void check_conforms(const ChartSpec& chart, const KTangent& kv);

// The canonical form η = Σ (dzᵅ − Σᵢ pᵢᵅ dqⁱ) ⊗ e_α, one covector per α.
std::vector<Covector> eval_eta(const ChartSpec& chart, const DarbouxPoint& pt);

// R_β = ∂/∂z^β.
std::vector<Tangent> reeb_fields(const ChartSpec& chart);

// ηᵅ(X) and ι_X dηᵅ with dηᵅ = Σᵢ dqⁱ ∧ dpᵢᵅ.
double contract_eta(const ChartSpec& chart, const DarbouxPoint& pt, const Tangent& x, int alpha);
Covector contract_deta(const ChartSpec& chart, const Tangent& x, int alpha);

struct ChiValue {
  Covector form;  // Σ_α ι_{Z_α} dηᵅ
  double scalar;  // Σ_α ηᵅ(Z_α)
};

ChiValue chi(const ChartSpec& chart, const DarbouxPoint& pt, const KTangent& kv);

// Matrix of χ at pt acting on the stacked fibre (Z_1, ..., Z_k); rows are the
// covector components followed by the scalar component.
Eigen::MatrixXd chi_matrix(const ChartSpec& chart, const DarbouxPoint& pt);

// Rank by singular values above rel_tol·σ_max.
int numeric_rank(const Eigen::MatrixXd& m, double rel_tol = 1e-9);

// k(n+nk+k) − rank χ, and the closed-form count (n+1)(k²−1).
int kernel_deficiency(const ChartSpec& chart, const DarbouxPoint& pt);
int gauge_dimension(const ChartSpec& chart);

KTangent zero_ktangent(const ChartSpec& chart);

}  // namespace kcontact
