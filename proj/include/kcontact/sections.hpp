#pragma once

#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "kcontact/types.hpp"

namespace kcontact {

using Sample = std::vector<double>;
using Samples = std::vector<Sample>;

// Section q ↦ (q, γᵢᵅ(q), γᵅ(q)) of ⊕ᵏT*Q × ℝᵏ → Q.
struct SectionZInd {
  int n = 1;
  int k = 1;
  Poly<VecSig> gamma_z;  // Q → ℝᵏ
  Poly<VecSig> gamma_p;  // Q → k×n, row-major by α
  std::function<bool(const std::vector<double>&)> domain;
  std::string name;

  template <class T>
  PhaseVec<T> at(const std::vector<T>& q) const {
    if (domain) check_domain(values_of(q));
    PhaseVec<T> x(n, k);
    x.q = q;
    x.p = gamma_p.template get<T>()(q);
    x.z = gamma_z.template get<T>()(q);
    return x;
  }
  DarbouxPoint operator()(const std::vector<double>& q) const { return at(q); }
  void check_domain(const std::vector<double>& q) const;
};

// Section (q, z) ↦ (q, γᵢᵅ(q, z), z) of ⊕ᵏT*Q × ℝᵏ → Q × ℝᵏ.
struct SectionZDep {
  int n = 1;
  int k = 1;
  Poly<ZDepSig> gamma_p;
  std::function<bool(const std::vector<double>&, const std::vector<double>&)> domain;
  std::string name;

  template <class T>
  PhaseVec<T> at(const std::vector<T>& q, const std::vector<T>& z) const {
    if (domain) check_domain(values_of(q), values_of(z));
    PhaseVec<T> x(n, k);
    x.q = q;
    x.z = z;
    x.p = gamma_p.template get<T>()(q, z);
    return x;
  }
  DarbouxPoint operator()(const std::vector<double>& q, const std::vector<double>& z) const {
    return at(q, z);
  }
  void check_domain(const std::vector<double>& q, const std::vector<double>& z) const;

  // A sample of Q × ℝᵏ is stored flat as (q, z).
  std::vector<double> q_of(const Sample& s) const { return {s.begin(), s.begin() + n}; }
  std::vector<double> z_of(const Sample& s) const { return {s.begin() + n, s.end()}; }
};

template <class Fz, class Fp>
SectionZInd make_section_zind(int n, int k, Fz gz, Fp gp, std::string name = {},
                              std::function<bool(const std::vector<double>&)> domain = {}) {
  SectionZInd s;
  s.n = n;
  s.k = k;
  s.gamma_z = Poly<VecSig>::from(gz);
  s.gamma_p = Poly<VecSig>::from(gp);
  s.name = std::move(name);
  s.domain = std::move(domain);
  return s;
}

template <class Fp>
SectionZDep make_section_zdep(
    int n, int k, Fp gp, std::string name = {},
    std::function<bool(const std::vector<double>&, const std::vector<double>&)> domain = {}) {
  SectionZDep s;
  s.n = n;
  s.k = k;
  s.gamma_p = Poly<ZDepSig>::from(gp);
  s.name = std::move(name);
  s.domain = std::move(domain);
  return s;
}

// Jacobian of a VecSig callable at x by forward duals: rows are outputs.
Eigen::MatrixXd jacobian(const Poly<VecSig>& f, const std::vector<double>& x);

// Holonomic section from potentials: γᵅ = Wᵅ, γᵢᵅ = ∂Wᵅ/∂qⁱ. W must be given
// at all three levels; the momentum block then exists at two.
SectionZInd from_potentials(int n, int k, const Poly<VecSig>& W, std::string name = {},
                            std::function<bool(const std::vector<double>&)> domain = {});

template <class F>
SectionZInd from_potentials(int n, int k, F W, std::string name = {},
                            std::function<bool(const std::vector<double>&)> domain = {}) {
  return from_potentials(n, k, Poly<VecSig>::from(W), std::move(name), std::move(domain));
}

// max |γᵢᵅ − ∂γᵅ/∂qⁱ| over the samples.
double check_holonomic(const SectionZInd& g, const Samples& qs);

// max |∂γᵢᵅ/∂qʲ − ∂γⱼᵅ/∂qⁱ| over the samples (symmetry of the momentum Jacobian).
double check_symmetric_jacobian(const SectionZInd& g, const Samples& qs);

// Derivatives of γ_p(q, z) in q and z at a sample (rows: α·n + i).
struct ZDepJacobian {
  Eigen::MatrixXd dq;  // (kn) × n
  Eigen::MatrixXd dz;  // (kn) × k
};
ZDepJacobian zdep_jacobian(const SectionZDep& g, const std::vector<double>& q, const std::vector<double>& z);

// max over samples and (α, i, j) of the antisymmetric part of
// A_ijᵅ = ∂γⱼᵅ/∂qⁱ + Σ_β γᵢᵝ ∂γⱼᵅ/∂zᵝ. Identically 0 for n = 1.
double check_max_coisotropic(const SectionZDep& g, const Samples& qz);

// max |∂γᵢᵅ/∂qʲ − ∂γⱼᵅ/∂qⁱ| at the fixed z.
double check_isotropic_slices(const SectionZDep& g, const std::vector<double>& z, const Samples& qs);

// max over samples and α, β of |ηᵅ(Tγ(∂/∂z^β)) − δᵅ_β|; zero for every section
// since the pushed-forward vertical field has no q-component.
double check_vertical_eta(const SectionZDep& g, const Samples& qz);

// count uniform samples in the box [lo, hi], reproducible for a given seed.
Samples sample_box(const std::vector<double>& lo, const std::vector<double>& hi, int count,
                   unsigned seed);

// Tensor grid with m points per coordinate over [lo, hi].
Samples grid_box(const std::vector<double>& lo, const std::vector<double>& hi, int m);

}  // namespace kcontact
