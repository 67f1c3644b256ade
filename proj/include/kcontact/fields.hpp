#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "kcontact/types.hpp"

namespace kcontact {

// A scalar function on the phase space, stored at three scalar levels so it can
// be differentiated exactly up to second order. `eval` must be side-effect free;
// grids are evaluated concurrently.
struct ScalarField {
  ChartSpec chart;
  Poly<FieldSig> f;
  std::function<bool(const DarbouxPoint&)> domain;  // empty means everywhere
  std::string domain_note;
  std::string name;
  Params params;

  template <class T>
  T eval(const PhaseVec<T>& x) const {
    if (domain) {
      if constexpr (std::is_same_v<T, double>) {
        check_domain(x);
      } else {
        check_domain(values_of(x));
      }
    }
    return f.template get<T>()(x);
  }

  double operator()(const DarbouxPoint& x) const { return eval(x); }

  void check_domain(const DarbouxPoint& x) const;
};

template <class F>
ScalarField make_field(const ChartSpec& chart, F fn, std::string name = {}, Params params = {},
                       std::function<bool(const DarbouxPoint&)> domain = {},
                       std::string domain_note = {}) {
  ScalarField s;
  s.chart = chart;
  s.f = Poly<FieldSig>::from(fn);
  s.name = std::move(name);
  s.params = std::move(params);
  s.domain = std::move(domain);
  s.domain_note = std::move(domain_note);
  return s;
}

// Gradient at any scalar level below the top one: grad_t<double> is the plain
// gradient, grad_t<D1> returns the gradient carrying one outer derivative.
template <class T>
PhaseVec<T> grad_t(const ScalarField& h, const PhaseVec<T>& x) {
  using DT = Dual<T>;
  PhaseVec<DT> xd(x.n, x.k);
  for (int j = 0; j < x.size(); ++j) xd[j] = DT(x[j]);
  PhaseVec<T> g(x.n, x.k);
  for (int j = 0; j < x.size(); ++j) {
    xd[j].d = T(1.0);
    g[j] = h.eval(xd).d;
    xd[j].d = T(0.0);
  }
  return g;
}

Gradient grad(const ScalarField& h, const DarbouxPoint& pt);

// Central differences per coordinate; an independent check on grad.
Gradient fd_grad(const ScalarField& h, const DarbouxPoint& pt, double step = 1e-5);

// (nk)×(nk) block ∂²h/∂pᵢᵅ∂pⱼᵝ, indexed by α·n + i.
Eigen::MatrixXd hessian_pp(const ScalarField& h, const DarbouxPoint& pt);

struct Regularity {
  bool is_regular = false;
  double min_abs_eigenvalue = 0.0;
  double max_abs_eigenvalue = 0.0;
  std::vector<double> spectrum;  // ascending eigenvalues of the p-Hessian
};

// Regular iff the smallest |eigenvalue| of the p-Hessian exceeds rel_tol times the largest.
Regularity check_regularity(const ScalarField& h, const DarbouxPoint& pt, double rel_tol = 1e-9);

struct FibreInverse {
  std::vector<double> p;  // k×n, row-major like PhaseVec::p
  int iterations = 0;
  double residual = 0.0;
};

// Solves ∂h/∂p(q, p, z) = v by damped Newton from p_init.
FibreInverse invert_fibre_derivative(const ScalarField& h, const std::vector<double>& q,
                                     const std::vector<double>& z, const std::vector<double>& v,
                                     const std::vector<double>& p_init, double tol = 1e-12,
                                     int max_iter = 50);

}  // namespace kcontact
