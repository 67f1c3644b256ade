#pragma once

#include <cstddef>
#include <vector>

#include "kcontact/types.hpp"

namespace kcontact {

// Regular grid on a box in ℝᵏ. Nodes are stored row-major: the last direction
// varies fastest.
struct GridSpec {
  std::vector<double> origin;
  std::vector<double> spacing;
  std::vector<int> counts;

  int dims() const { return static_cast<int>(counts.size()); }
  std::size_t size() const;
  std::size_t stride(int dir) const;
  std::vector<int> unravel(std::size_t idx) const;
  std::size_t index(const std::vector<int>& multi) const;
  std::vector<double> node(std::size_t idx) const;

  // Throws ShapeError on inconsistent sizes, nonpositive spacing, or fewer
  // than min_count nodes in some direction.
  void validate(int min_count = 3) const;

  // Interior nodes only (one node trimmed on each side).
  GridSpec interior() const;
};

// k vector fields on a base manifold of dimension dim (Q or Q×ℝᵏ). The callable
// returns the k components stacked: component α, coordinate i at [α·dim + i].
struct BaseField {
  int dim = 0;
  int k = 0;
  Poly<VecSig> f;
  std::function<bool(const std::vector<double>&)> domain;

  std::vector<double> component(const std::vector<double>& x, int alpha) const;
};

// Closed-form map t ↦ ψ(t) into phase space, differentiable to second order.
struct ClosedForm {
  int k = 0;
  Poly<CurveSig> f;

  explicit operator bool() const { return static_cast<bool>(f); }
};

// Values of a map on a grid over the base; optionally also in closed form.
struct BaseMap {
  GridSpec grid;
  std::vector<std::vector<double>> values;
};

// ψ on a grid, with an optional closed form used for exact derivatives.
struct SolutionMap {
  GridSpec grid;
  std::vector<DarbouxPoint> values;
  ClosedForm closed_form;
};

// Sample a closed form on every grid node.
SolutionMap sample_closed_form(const ClosedForm& cf, const GridSpec& grid);

// Derivatives ∂ψ/∂tᵅ of a closed form at t, one tangent per direction.
KTangent closed_form_derivatives(const ClosedForm& cf, const std::vector<double>& t);

// Finite difference of node values along one direction. With at least five
// nodes the stencils are fourth order (central inside, one-sided five-point
// near the ends); with three or four nodes they drop to second order.
template <class V, class Get>
double fd_derivative(const GridSpec& g, const std::vector<V>& values, std::size_t idx, int dir,
                     Get&& get) {
  const auto multi = g.unravel(idx);
  const int i = multi[dir];
  const int n = g.counts[dir];
  const std::ptrdiff_t s = static_cast<std::ptrdiff_t>(g.stride(dir));
  const double h = g.spacing[dir];
  auto f = [&](int offset) { return static_cast<double>(get(values[idx + offset * s])); };
  if (n >= 5) {
    if (i >= 2 && i <= n - 3) return (f(-2) - 8.0 * f(-1) + 8.0 * f(1) - f(2)) / (12.0 * h);
    if (i == 0) return (-25.0 * f(0) + 48.0 * f(1) - 36.0 * f(2) + 16.0 * f(3) - 3.0 * f(4)) / (12.0 * h);
    if (i == 1) return (-3.0 * f(-1) - 10.0 * f(0) + 18.0 * f(1) - 6.0 * f(2) + f(3)) / (12.0 * h);
    if (i == n - 2) return (3.0 * f(1) + 10.0 * f(0) - 18.0 * f(-1) + 6.0 * f(-2) - f(-3)) / (12.0 * h);
    return (25.0 * f(0) - 48.0 * f(-1) + 36.0 * f(-2) - 16.0 * f(-3) + 3.0 * f(-4)) / (12.0 * h);
  }
  if (i > 0 && i < n - 1) return (f(1) - f(-1)) / (2.0 * h);
  if (i == 0) return (-3.0 * f(0) + 4.0 * f(1) - f(2)) / (2.0 * h);
  return (3.0 * f(0) - 4.0 * f(-1) + f(-2)) / (2.0 * h);
}

}  // namespace kcontact
