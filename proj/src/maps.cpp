#include "kcontact/maps.hpp"

#include <string>

namespace kcontact {

std::size_t GridSpec::size() const {
  std::size_t s = 1;
  for (int c : counts) s *= static_cast<std::size_t>(c);
  return counts.empty() ? 0 : s;
}

std::size_t GridSpec::stride(int dir) const {
  std::size_t s = 1;
  for (int d = dims() - 1; d > dir; --d) s *= static_cast<std::size_t>(counts[d]);
  return s;
}

std::vector<int> GridSpec::unravel(std::size_t idx) const {
  std::vector<int> m(dims());
  for (int d = dims() - 1; d >= 0; --d) {
    m[d] = static_cast<int>(idx % counts[d]);
    idx /= counts[d];
  }
  return m;
}

std::size_t GridSpec::index(const std::vector<int>& multi) const {
  std::size_t idx = 0;
  for (int d = 0; d < dims(); ++d) idx = idx * counts[d] + multi[d];
  return idx;
}

std::vector<double> GridSpec::node(std::size_t idx) const {
  auto m = unravel(idx);
  std::vector<double> t(dims());
  for (int d = 0; d < dims(); ++d) t[d] = origin[d] + spacing[d] * m[d];
  return t;
}

void GridSpec::validate(int min_count) const {
  if (counts.empty()) throw ShapeError("grid has no directions");
  if (origin.size() != counts.size() || spacing.size() != counts.size()) {
    throw ShapeError("grid origin, spacing and counts must have the same length");
  }
  for (int d = 0; d < dims(); ++d) {
    if (!(spacing[d] > 0.0)) throw ShapeError("grid spacing must be positive");
    if (counts[d] < min_count) {
      throw ShapeError("grid needs at least " + std::to_string(min_count) +
                       " nodes per direction, direction " + std::to_string(d) + " has " +
                       std::to_string(counts[d]));
    }
  }
}

GridSpec GridSpec::interior() const {
  GridSpec g = *this;
  for (int d = 0; d < dims(); ++d) {
    g.origin[d] += spacing[d];
    g.counts[d] -= 2;
  }
  return g;
}

std::vector<double> BaseField::component(const std::vector<double>& x, int alpha) const {
  auto all = f.f0(x);
  return std::vector<double>(all.begin() + alpha * dim, all.begin() + (alpha + 1) * dim);
}

SolutionMap sample_closed_form(const ClosedForm& cf, const GridSpec& grid) {
  if (!cf) throw ContractError("no closed form to sample");
  if (grid.dims() != cf.k) throw ShapeError("grid dimension differs from the closed form's");
  SolutionMap m;
  m.grid = grid;
  m.closed_form = cf;
  m.values.reserve(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) m.values.push_back(cf.f.f0(grid.node(i)));
  return m;
}

KTangent closed_form_derivatives(const ClosedForm& cf, const std::vector<double>& t) {
  std::vector<D1> td = promote<D1>(t);
  KTangent out;
  out.reserve(cf.k);
  for (int a = 0; a < cf.k; ++a) {
    td[a].d = 1.0;
    PhaseVec<D1> y = cf.f.get<D1>()(td);
    td[a].d = 0.0;
    Tangent d(y.n, y.k);
    for (int j = 0; j < y.size(); ++j) d[j] = y[j].d;
    out.push_back(std::move(d));
  }
  return out;
}

}  // namespace kcontact
