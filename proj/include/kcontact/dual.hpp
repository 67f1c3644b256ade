#pragma once

#include <cmath>
#include <type_traits>

namespace kcontact {

// Forward-mode dual number x = v + d·ε with ε² = 0. Nesting (Dual<Dual<double>>)
// carries two independent infinitesimals, which is how Hessians are taken.
template <class T>
struct Dual {
  T v{};
  T d{};

  Dual() = default;
  Dual(double x) : v(x), d(0.0) {}
  template <class U = T, std::enable_if_t<!std::is_same_v<U, double>, int> = 0>
  Dual(const T& x) : v(x), d(0.0) {}
  Dual(const T& value, const T& deriv) : v(value), d(deriv) {}

  Dual& operator+=(const Dual& o) { v += o.v; d += o.d; return *this; }
  Dual& operator-=(const Dual& o) { v -= o.v; d -= o.d; return *this; }
  Dual& operator*=(const Dual& o) { *this = *this * o; return *this; }
  Dual& operator/=(const Dual& o) { *this = *this / o; return *this; }
};

using D1 = Dual<double>;
using D2 = Dual<D1>;

template <class T> struct is_dual : std::false_type {};
template <class T> struct is_dual<Dual<T>> : std::true_type {};
template <class T> inline constexpr bool is_dual_v = is_dual<T>::value;

// Nesting depth: double -> 0, D1 -> 1, D2 -> 2.
template <class T> struct dual_depth : std::integral_constant<int, 0> {};
template <class T> struct dual_depth<Dual<T>> : std::integral_constant<int, 1 + dual_depth<T>::value> {};

inline double value_of(double x) { return x; }
template <class T>
double value_of(const Dual<T>& x) { return value_of(x.v); }

template <class T> Dual<T> operator+(const Dual<T>& a, const Dual<T>& b) { return {a.v + b.v, a.d + b.d}; }
template <class T> Dual<T> operator-(const Dual<T>& a, const Dual<T>& b) { return {a.v - b.v, a.d - b.d}; }
template <class T> Dual<T> operator-(const Dual<T>& a) { return {-a.v, -a.d}; }
template <class T> Dual<T> operator+(const Dual<T>& a) { return a; }
template <class T> Dual<T> operator*(const Dual<T>& a, const Dual<T>& b) {
  return {a.v * b.v, a.v * b.d + a.d * b.v};
}
template <class T> Dual<T> operator/(const Dual<T>& a, const Dual<T>& b) {
  T inv = T(1.0) / b.v;
  return {a.v * inv, (a.d - a.v * inv * b.d) * inv};
}

template <class T> Dual<T> operator+(const Dual<T>& a, double b) { return {a.v + b, a.d}; }
template <class T> Dual<T> operator+(double a, const Dual<T>& b) { return {a + b.v, b.d}; }
template <class T> Dual<T> operator-(const Dual<T>& a, double b) { return {a.v - b, a.d}; }
template <class T> Dual<T> operator-(double a, const Dual<T>& b) { return {a - b.v, -b.d}; }
template <class T> Dual<T> operator*(const Dual<T>& a, double b) { return {a.v * b, a.d * b}; }
template <class T> Dual<T> operator*(double a, const Dual<T>& b) { return {a * b.v, a * b.d}; }
template <class T> Dual<T> operator/(const Dual<T>& a, double b) { return {a.v / b, a.d / b}; }
template <class T> Dual<T> operator/(double a, const Dual<T>& b) { return Dual<T>(a) / b; }

template <class T> bool operator<(const Dual<T>& a, const Dual<T>& b) { return value_of(a) < value_of(b); }
template <class T> bool operator>(const Dual<T>& a, const Dual<T>& b) { return value_of(a) > value_of(b); }
template <class T> bool operator<=(const Dual<T>& a, const Dual<T>& b) { return value_of(a) <= value_of(b); }
template <class T> bool operator>=(const Dual<T>& a, const Dual<T>& b) { return value_of(a) >= value_of(b); }
template <class T> bool operator<(const Dual<T>& a, double b) { return value_of(a) < b; }
template <class T> bool operator>(const Dual<T>& a, double b) { return value_of(a) > b; }
template <class T> bool operator<=(const Dual<T>& a, double b) { return value_of(a) <= b; }
template <class T> bool operator>=(const Dual<T>& a, double b) { return value_of(a) >= b; }
template <class T> bool operator<(double a, const Dual<T>& b) { return a < value_of(b); }
template <class T> bool operator>(double a, const Dual<T>& b) { return a > value_of(b); }

// Elementary functions. The double overloads let generic code inside this
// namespace call sqrt/exp/... unqualified for every scalar type.
inline double sqrt(double x) { return std::sqrt(x); }
inline double exp(double x) { return std::exp(x); }
inline double log(double x) { return std::log(x); }
inline double log1p(double x) { return std::log1p(x); }
inline double sin(double x) { return std::sin(x); }
inline double cos(double x) { return std::cos(x); }
inline double abs(double x) { return std::fabs(x); }
inline double pow(double x, double e) { return std::pow(x, e); }

template <class T> Dual<T> sqrt(const Dual<T>& a) {
  T s = sqrt(a.v);
  return {s, a.d / (2.0 * s)};
}
template <class T> Dual<T> exp(const Dual<T>& a) {
  T e = exp(a.v);
  return {e, a.d * e};
}
template <class T> Dual<T> log(const Dual<T>& a) { return {log(a.v), a.d / a.v}; }
template <class T> Dual<T> log1p(const Dual<T>& a) { return {log1p(a.v), a.d / (1.0 + a.v)}; }
template <class T> Dual<T> sin(const Dual<T>& a) { return {sin(a.v), a.d * cos(a.v)}; }
template <class T> Dual<T> cos(const Dual<T>& a) { return {cos(a.v), -(a.d * sin(a.v))}; }
template <class T> Dual<T> abs(const Dual<T>& a) { return value_of(a) < 0.0 ? -a : a; }
template <class T> Dual<T> pow(const Dual<T>& a, double e) {
  T pv = pow(a.v, e);
  return {pv, a.d * (e * pow(a.v, e - 1.0))};
}

// Inverse of a scalar function known only through a value-level solver:
// given y and x0 = f⁻¹(value(y)), propagate derivatives by dx = dy / f'(x).
// `fprime` must accept every nesting level below the one being built.
template <class T, class Solve, class FPrime>
T implicit_inverse(const T& y, Solve&& solve, FPrime&& fprime) {
  if constexpr (std::is_same_v<T, double>) {
    return solve(y);
  } else {
    auto inner = implicit_inverse(y.v, solve, fprime);
    return T(inner, y.d / fprime(inner));
  }
}

}  // namespace kcontact
