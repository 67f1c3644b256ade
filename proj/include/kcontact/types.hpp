#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "kcontact/dual.hpp"
#include "kcontact/errors.hpp"

namespace kcontact {

// Dimensions of the canonical chart on ⊕ᵏT*Q × ℝᵏ.
struct ChartSpec {
  int n = 1;
  int k = 1;

  int dim() const { return n + n * k + k; }
  void validate() const;
  bool operator==(const ChartSpec& o) const { return n == o.n && k == o.k; }
};

// A vector of phase-space components laid out as (q, p, z). The momentum block
// stores p_i^α at p[α*n + i], so row α is the α-th copy of T*Q. The same
// layout serves for points, tangent vectors, covectors and gradients.
template <class T>
struct PhaseVec {
  int n = 0;
  int k = 0;
  std::vector<T> q;
  std::vector<T> p;
  std::vector<T> z;

  PhaseVec() = default;
  PhaseVec(int n_, int k_) : n(n_), k(k_), q(n_, T(0.0)), p(n_ * k_, T(0.0)), z(k_, T(0.0)) {}
  explicit PhaseVec(const ChartSpec& c) : PhaseVec(c.n, c.k) {}

  T& P(int a, int i) { return p[a * n + i]; }
  const T& P(int a, int i) const { return p[a * n + i]; }

  int size() const { return n + n * k + k; }
  ChartSpec chart() const { return {n, k}; }

  // Flat access in (q, p, z) order.
  T& operator[](int idx) {
    if (idx < n) return q[idx];
    if (idx < n + n * k) return p[idx - n];
    return z[idx - n - n * k];
  }
  const T& operator[](int idx) const { return const_cast<PhaseVec&>(*this)[idx]; }
};

using DarbouxPoint = PhaseVec<double>;
using Tangent = PhaseVec<double>;
using Covector = PhaseVec<double>;
using Gradient = PhaseVec<double>;

// k tangent vectors at one point, X_1..X_k.
using KTangent = std::vector<Tangent>;

enum class Mode { standard, evolution };

const char* to_string(Mode m);
Mode parse_mode(const std::string& s);

using Params = std::map<std::string, double>;

// Look up a named parameter or fail with a config error naming it.
double param(const Params& p, const std::string& name);
double param_or(const Params& p, const std::string& name, double fallback);

// Value-level copy of a (possibly dual) phase vector.
template <class T>
DarbouxPoint values_of(const PhaseVec<T>& x) {
  DarbouxPoint out(x.n, x.k);
  for (int i = 0; i < x.size(); ++i) out[i] = value_of(x[i]);
  return out;
}

template <class T>
std::vector<double> values_of(const std::vector<T>& x) {
  std::vector<double> out(x.size());
  for (size_t i = 0; i < x.size(); ++i) out[i] = value_of(x[i]);
  return out;
}

template <class T>
std::vector<T> promote(const std::vector<double>& x) {
  return std::vector<T>(x.begin(), x.end());
}

template <class T>
PhaseVec<T> promote(const DarbouxPoint& x) {
  PhaseVec<T> out(x.n, x.k);
  for (int i = 0; i < x.size(); ++i) out[i] = T(x[i]);
  return out;
}

double max_abs_diff(const DarbouxPoint& a, const DarbouxPoint& b);
double max_abs(const DarbouxPoint& a);

// A callable stored at the three scalar levels double, D1 and D2, so that a
// single generic lambda can be differentiated up to second order. A level may
// be left empty when the construction cannot supply it (e.g. a derivative of a
// user callable already consumes one level); asking for it is a contract error.
template <template <class> class Sig>
struct Poly {
  std::function<Sig<double>> f0;
  std::function<Sig<D1>> f1;
  std::function<Sig<D2>> f2;

  template <class F>
  static Poly from(F f) {
    Poly out;
    out.f0 = f;
    out.f1 = f;
    out.f2 = f;
    return out;
  }

  template <class T>
  const std::function<Sig<T>>& get() const {
    if constexpr (std::is_same_v<T, double>) {
      return f0;
    } else if constexpr (std::is_same_v<T, D1>) {
      if (!f1) throw ContractError("callable is not available at first derivative order");
      return f1;
    } else {
      static_assert(std::is_same_v<T, D2>, "unsupported scalar level");
      if (!f2) throw ContractError("callable is not available at second derivative order");
      return f2;
    }
  }

  explicit operator bool() const { return static_cast<bool>(f0); }
};

template <class T> using FieldSig = T(const PhaseVec<T>&);
template <class T> using VecSig = std::vector<T>(const std::vector<T>&);
template <class T> using ZDepSig = std::vector<T>(const std::vector<T>&, const std::vector<T>&);
template <class T> using CurveSig = PhaseVec<T>(const std::vector<T>&);

}  // namespace kcontact
