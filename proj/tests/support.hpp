#pragma once

// Helpers shared by the test binaries: seeded random points and
// finite-difference oracles that never call into the library's derivatives.

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "kcontact/types.hpp"

namespace testing {

using kcontact::ChartSpec;
using kcontact::DarbouxPoint;

inline DarbouxPoint random_point(const ChartSpec& c, std::mt19937& rng, double lo = -1.0, double hi = 1.0) {
  std::uniform_real_distribution<double> U(lo, hi);
  DarbouxPoint x(c);
  for (int j = 0; j < x.size(); ++j) x[j] = U(rng);
  return x;
}

inline std::vector<double> random_vec(int m, std::mt19937& rng, double lo = -1.0, double hi = 1.0) {
  std::uniform_real_distribution<double> U(lo, hi);
  std::vector<double> v(m);
  for (auto& x : v) x = U(rng);
  return v;
}

// Central difference of a scalar function of a flat vector along coordinate j.
inline double fd_partial(const std::function<double(const std::vector<double>&)>& f, std::vector<double> x,
                         int j, double h = 1e-5) {
  const double x0 = x[j];
  x[j] = x0 + h;
  const double up = f(x);
  x[j] = x0 - h;
  const double dn = f(x);
  return (up - dn) / (2.0 * h);
}

// Five-point central difference, for oracles that need ~1e-10 accuracy.
inline double fd5(const std::function<double(double)>& f, double x, double h = 1e-3) {
  return (f(x - 2 * h) - 8 * f(x - h) + 8 * f(x + h) - f(x + 2 * h)) / (12.0 * h);
}

inline double rel_err(double a, double b) { return std::fabs(a - b) / std::max(1.0, std::fabs(b)); }

inline std::vector<double> flat(const DarbouxPoint& x) {
  std::vector<double> v(x.size());
  for (int j = 0; j < x.size(); ++j) v[j] = x[j];
  return v;
}

inline DarbouxPoint unflat(const ChartSpec& c, const std::vector<double>& v) {
  DarbouxPoint x(c);
  for (int j = 0; j < x.size(); ++j) x[j] = v[j];
  return x;
}

}  // namespace testing
